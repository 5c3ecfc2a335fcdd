#pragma once

#include <stdexcept>
#include <string>

namespace svehdr {

/// Base of every error raised by the library. The CLI maps each derived
/// type onto a stable process exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition or configuration violation (exit code 2).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Filesystem failure (exit code 3).
class IoError : public Error {
public:
    using Error::Error;
};

enum class FormatErrc {
    malformed_header,
    unsupported_maxval,
    truncated,
    sample_overflow,
    trailing_data,
    bad_magic,
    unsupported_version,
    missing_key,
    unknown_key,
    bad_value,
    invariant_violation,
    non_finite,
    syntax,
};

inline const char* to_string(FormatErrc code);

/// A file was readable but its content is not a valid instance of the
/// expected format (exit code 3).
class FormatError : public Error {
public:
    FormatError(FormatErrc code, const std::string& what)
        : Error(std::string(to_string(code)) + ": " + what), code_(code) {}

    FormatErrc code() const noexcept { return code_; }

private:
    FormatErrc code_;
};

/// Calibration data does not cover what the fit needs (exit code 4).
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Image and profile disagree on sensor parameters (exit code 5).
class ProfileMismatch : public Error {
public:
    using Error::Error;
};

inline const char* to_string(FormatErrc code) {
    switch (code) {
        case FormatErrc::malformed_header: return "malformed header";
        case FormatErrc::unsupported_maxval: return "unsupported maxval";
        case FormatErrc::truncated: return "truncated";
        case FormatErrc::sample_overflow: return "sample overflow";
        case FormatErrc::trailing_data: return "trailing data";
        case FormatErrc::bad_magic: return "bad magic";
        case FormatErrc::unsupported_version: return "unsupported version";
        case FormatErrc::missing_key: return "missing key";
        case FormatErrc::unknown_key: return "unknown key";
        case FormatErrc::bad_value: return "bad value";
        case FormatErrc::invariant_violation: return "invariant violation";
        case FormatErrc::non_finite: return "non-finite value";
        case FormatErrc::syntax: return "syntax error";
    }
    return "format error";
}

}  // namespace svehdr
