#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace krf {

/** Failure categories shared by all modules; the CLI maps them to exit codes. */
enum class ErrorCode
{
    NotKahler,
    BasisMismatch,
    NegativeTime,
    InvalidInput,
    InvalidModel,
    DomainContainsZero,
    NonPositiveMetric,
    DivergentTail,
    PositivityFailure,
    NonDecreasingVolume,
    InsufficientResolution,
    ProfileUndefined,
    ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
    public:
        Error(ErrorCode code, const std::string& what)
            : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::NotKahler:              return "NotKahler";
        case ErrorCode::BasisMismatch:          return "BasisMismatch";
        case ErrorCode::NegativeTime:           return "NegativeTime";
        case ErrorCode::InvalidInput:           return "InvalidInput";
        case ErrorCode::InvalidModel:           return "InvalidModel";
        case ErrorCode::DomainContainsZero:     return "DomainContainsZero";
        case ErrorCode::NonPositiveMetric:      return "NonPositiveMetric";
        case ErrorCode::DivergentTail:          return "DivergentTail";
        case ErrorCode::PositivityFailure:      return "PositivityFailure";
        case ErrorCode::NonDecreasingVolume:    return "NonDecreasingVolume";
        case ErrorCode::InsufficientResolution: return "InsufficientResolution";
        case ErrorCode::ProfileUndefined:       return "ProfileUndefined";
        case ErrorCode::ConfigError:            return "ConfigError";
    }
    return "Unknown";
}

}   // namespace krf
