#ifndef HEUNRAD_ERROR_HPP
#define HEUNRAD_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace heunrad {

enum class ErrorCode {
    BranchUnavailable,
    DidNotConverge,
    SingularPoint,
    OutOfDomain,
    NotIrregular,
    InvalidParameter,
    DivisionBySingularArea,
    IntervalContainsSingularity,
    StepTooLarge,
    OnHorizon,
    OrderExceedsDegree,
    TooCloseToPole,
    IoError,
    ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::BranchUnavailable: return "BranchUnavailable";
    case ErrorCode::DidNotConverge: return "DidNotConverge";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NotIrregular: return "NotIrregular";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DivisionBySingularArea: return "DivisionBySingularArea";
    case ErrorCode::IntervalContainsSingularity: return "IntervalContainsSingularity";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::OnHorizon: return "OnHorizon";
    case ErrorCode::OrderExceedsDegree: return "OrderExceedsDegree";
    case ErrorCode::TooCloseToPole: return "TooCloseToPole";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure in the library is reported through this type; `code()` is
/// stable and machine readable, `what()` is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code)
    {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace heunrad

#endif
