#pragma once

#include <stdexcept>
#include <string>

namespace glp {

// Invalid model or experiment parameter (p outside [0,1], steps = 0, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Unknown vertex or block.
struct LookupError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Requested run exceeds the 32-bit vertex id space.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

// Not enough data for a requested estimate, or a degenerate fit.
struct StatisticsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The hypothesis of a bound the caller asked to test under does not hold.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad configuration (duplicate block specs, unknown config key, ...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed input file. `what()` carries the line/field location.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace glp
