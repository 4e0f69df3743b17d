#pragma once

#include <stdexcept>
#include <string>

namespace vortex {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition or argument failure. Maps to CLI exit code 2.
class InvalidInput : public Error {
public:
    using Error::Error;
};

class ToleranceNotMet : public Error {
public:
    ToleranceNotMet(const std::string& what, double achieved_error)
        : Error(what), achieved_error_(achieved_error) {}
    double achieved_error() const { return achieved_error_; }

private:
    double achieved_error_;
};

class CflViolation : public Error {
public:
    CflViolation(const std::string& what, double required_dt)
        : Error(what), required_dt_(required_dt) {}
    double required_dt() const { return required_dt_; }

private:
    double required_dt_;
};

// Armed-patch parameters that cannot be realized (arms overlap or exceed the disk area).
class InvalidSpec : public InvalidInput {
public:
    InvalidSpec(const std::string& what, double max_feasible_gamma)
        : InvalidInput(what), max_feasible_gamma_(max_feasible_gamma) {}
    double max_feasible_gamma() const { return max_feasible_gamma_; }

private:
    double max_feasible_gamma_;
};

}  // namespace vortex
