#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace oal {

namespace detail {
/// Compact %g rendering for numbers inside error messages (std::to_string
/// prints fixed six decimals, which turns 1e-8 into "0.000000").
inline std::string num_str(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}
} // namespace detail

/// A dimension argument was non-positive or otherwise unusable.
struct InvalidDimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Two objects that must live in the same truncated space do not.
struct DimensionMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An operation that requires a normalized state received an unnormalized one.
struct NormalizationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A truncated-basis result cannot be trusted at the requested dimension or
/// step count (population reached the top of the basis, a series failed to
/// settle, ...).  The message says which knob to turn.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conditioning on a measurement outcome whose probability is numerically zero.
struct ZeroProbabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario file / command line could not be parsed or validated.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace oal
