import json
import math

import numpy as np
import pytest

import vortexpatch as vp


def test_rankine_mass_and_velocity():
    disk = vp.rankine(1.0, 512)
    assert abs(disk.area() - math.pi) < 1e-12
    u = vp.velocity(disk, np.array([[2.0, 0.0], [0.5, 0.0]]))
    assert np.allclose(u[0], [0.0, 0.25], atol=1e-4)
    assert np.allclose(u[1], [0.0, 0.25], atol=1e-4)
    assert vp.rankine_mu(2.0) == pytest.approx(0.125)


def test_armed_patch_and_infeasible_gamma():
    armed = vp.armed_patch(3, 5.0, 0.05, 0.05)
    assert armed.area() == pytest.approx(math.pi, abs=1e-6)
    with pytest.raises(ValueError, match="overlap"):
        vp.armed_patch(3, 5.0, 10.0)


def test_deviation_and_deficit_of_a_shifted_disk():
    disk = vp.rankine(1.0, 1024).translated(0.1, 0.0)
    eps, centre = vp.nearest_disk_deviation(disk)
    assert eps < 1e-3
    assert centre[0] == pytest.approx(0.1, abs=1e-4)
    assert vp.disk_symmetric_difference(disk, 0.0, 0.0, 1.0) > 0.3
    assert abs(vp.energy_deficit(vp.rankine(1.0, 512))) < 1e-8


def test_short_run_keeps_the_disk():
    res = vp.run(vp.rankine(1.0, 256), T=0.5, dt=0.01, frame_stride=25)
    assert not res["halted"]
    assert len(res["frames"]) == 3
    radii = np.linalg.norm(res["frames"][-1]["vertices"], axis=1)
    assert np.ptp(radii) < 1e-8
    assert res["frames"][-1]["report"]["mass"] == pytest.approx(math.pi, abs=1e-10)


def test_spread_bound_and_diagnostics():
    spread, bound = vp.spread_bound(vp.rankine(1.0, 256), 0.5)
    assert spread < 1e-12 and bound == 0.0
    d = vp.velocity_diagnostics(vp.rankine(1.0, 1024))
    assert d["sup_deviation"] < 1e-3


def test_evolve_writes_a_run_directory(tmp_path):
    cfg = {"scenario": "rankine", "name": "py", "numerics": {"T": 0.2, "dt": 0.01, "frame_stride": 10}}
    out = vp.evolve(json.dumps(cfg), str(tmp_path / "py"))
    assert out["frames"] == 3 and not out["halted"]
    manifest = json.loads((tmp_path / "py" / "manifest.json").read_text())
    assert manifest["status"] == "complete"
    with pytest.raises(ValueError):
        vp.evolve(json.dumps({"scenario": "nope"}), str(tmp_path / "bad"))
