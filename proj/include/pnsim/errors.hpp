#pragma once

#include <stdexcept>
#include <string>

namespace pnsim {

/// Dimension or length disagreement between related arguments.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid or inconsistent configuration detected before any work is done.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input is structurally valid but mathematically degenerate (e.g. arg of 0).
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical operation failed or is unreliable (singular systems etc.).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix failed a structural validation check (Hermitian symmetry, PSD-ness).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested problem size exceeds a deliberate brute-force cap.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// API used against its documented contract.
struct UsageError : std::logic_error {
    using std::logic_error::logic_error;
};

/// File or stream level failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pnsim
