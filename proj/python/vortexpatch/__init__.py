"""Contour dynamics of 2D vortex patches and their stability diagnostics."""

from ._core import (
    InvalidInput,
    Patch,
    VortexError,
    __version__,
    armed_patch,
    disk_symmetric_difference,
    energy_deficit,
    evolve,
    functional_report,
    kirchhoff_ellipse,
    max_feasible_gamma,
    nearest_disk_deviation,
    pseudo_energy,
    rankine,
    rankine_mu,
    run,
    spread_bound,
    velocity,
    velocity_diagnostics,
)

__all__ = [
    "InvalidInput",
    "Patch",
    "VortexError",
    "__version__",
    "armed_patch",
    "disk_symmetric_difference",
    "energy_deficit",
    "evolve",
    "functional_report",
    "kirchhoff_ellipse",
    "max_feasible_gamma",
    "nearest_disk_deviation",
    "pseudo_energy",
    "rankine",
    "rankine_mu",
    "run",
    "spread_bound",
    "velocity",
    "velocity_diagnostics",
]
