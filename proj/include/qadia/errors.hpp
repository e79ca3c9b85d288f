#pragma once

#include <stdexcept>
#include <string>

namespace qadia {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NonHermitian : Error {
    using Error::Error;
};

struct NonPhysical : Error {
    using Error::Error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

struct UnsupportedModel : Error {
    using Error::Error;
};

struct DegenerateLabeling : Error {
    using Error::Error;
};

struct DegenerateGap : Error {
    using Error::Error;
};

struct FrameMismatch : Error {
    using Error::Error;
};

struct InsufficientSamples : Error {
    using Error::Error;
};

/// Fixed-step integration produced more per-step norm (or trace) drift than
/// allowed; the caller should rerun with at least suggested_n_steps.
struct StepTooLarge : Error {
    StepTooLarge(const std::string& msg, int suggested)
        : Error(msg), suggested_n_steps(suggested) {}
    int suggested_n_steps;
};

struct ConfigError : Error {
    ConfigError(const std::string& msg, int line_no = 0) : Error(msg), line(line_no) {}
    int line;
};

}  // namespace qadia
