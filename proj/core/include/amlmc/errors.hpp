#pragma once

#include <stdexcept>
#include <string>

namespace amlmc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Drift/diffusion returned NaN or infinity at a finite evaluation point.
struct NonFiniteEvaluation : Error {
    using Error::Error;
};

/// The simulated state became NaN or infinite. Indicates an unstable
/// timestep policy (e.g. uniform-step explicit Euler on a superlinear drift).
struct NonFiniteState : Error {
    using Error::Error;
};

struct MissingJacobian : Error {
    using Error::Error;
};

struct OutOfRange : Error {
    using Error::Error;
};

struct ScheduleTooShort : Error {
    using Error::Error;
};

struct NotScalar : Error {
    using Error::Error;
};

struct NonIntegrable : Error {
    using Error::Error;
};

struct MaxLevelExceeded : Error {
    using Error::Error;
};

struct NonPositiveValue : Error {
    using Error::Error;
};

struct DegenerateFit : Error {
    using Error::Error;
};

}  // namespace amlmc
