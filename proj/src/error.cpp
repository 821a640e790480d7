#include "palmlab/error.hpp"

namespace palmlab {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::NoStraddle: return "NoStraddle";
    case ErrorCode::IndexOutOfPattern: return "IndexOutOfPattern";
    case ErrorCode::OutsideWindow: return "OutsideWindow";
    case ErrorCode::InsufficientContext: return "InsufficientContext";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DegenerateWindow: return "DegenerateWindow";
    case ErrorCode::NoMean: return "NoMean";
    case ErrorCode::UnknownTilt: return "UnknownTilt";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::InsufficientCoverage: return "InsufficientCoverage";
    case ErrorCode::InsufficientWindow: return "InsufficientWindow";
    case ErrorCode::TooFewCheckpoints: return "TooFewCheckpoints";
    case ErrorCode::LowEffectiveSampleSize: return "LowEffectiveSampleSize";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace palmlab
