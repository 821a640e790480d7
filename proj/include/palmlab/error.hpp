#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace palmlab {

/// Conditions reported by the library. Every failure surfaces as an
/// `Error` carrying one of these codes; nothing is silently clamped.
enum class ErrorCode {
    InvalidPattern,
    NoStraddle,
    IndexOutOfPattern,
    OutsideWindow,
    InsufficientContext,
    ParseError,
    DegenerateWindow,
    NoMean,
    UnknownTilt,
    UnknownModel,
    InvalidArgument,
    ZeroDenominator,
    InsufficientCoverage,
    InsufficientWindow,
    TooFewCheckpoints,
    LowEffectiveSampleSize,
    NotApplicable,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace palmlab
