#pragma once

#include <stdexcept>
#include <string>

namespace kvnlab {

// Bad caller input. The CLI maps this family to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class GridMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// A physics or numerical precondition failed at run time (exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BoundaryMassError : public NumericalError {
public:
    BoundaryMassError(const std::string& what, double mass)
        : NumericalError(what), mass_(mass) {}
    double mass() const noexcept { return mass_; }

private:
    double mass_;
};

}  // namespace kvnlab
