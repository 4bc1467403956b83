#pragma once

#include <stdexcept>
#include <string>

namespace mmsim {

/// Rejected input: a precondition of the called operation does not hold.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical contract (Hermiticity, nilpotency, real coefficients, ...) was violated.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mmsim
