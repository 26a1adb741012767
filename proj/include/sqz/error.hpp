#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqz {

enum class ErrorCode {
    InvalidArgument,
    ZeroSeries,
    NoFiniteTail,
    OutOfDomain,
    NonSummable,
    InvalidTau,
    InvalidGamma,
    EpsilonTooLarge,
    TargetTooCloseToWall,
    DensityNotEven,
    DensityNotMonotone,
    InfiniteSecondMoment,
    QuadratureFailure,
    NotInDomain,
    NotMonotone,
    AtSingularity,
    BoundViolated,
};

inline std::string_view to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroSeries: return "ZeroSeries";
    case ErrorCode::NoFiniteTail: return "NoFiniteTail";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NonSummable: return "NonSummable";
    case ErrorCode::InvalidTau: return "InvalidTau";
    case ErrorCode::InvalidGamma: return "InvalidGamma";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::TargetTooCloseToWall: return "TargetTooCloseToWall";
    case ErrorCode::DensityNotEven: return "DensityNotEven";
    case ErrorCode::DensityNotMonotone: return "DensityNotMonotone";
    case ErrorCode::InfiniteSecondMoment: return "InfiniteSecondMoment";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NotInDomain: return "NotInDomain";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::AtSingularity: return "AtSingularity";
    case ErrorCode::BoundViolated: return "BoundViolated";
    }
    return "Unknown";
}

// Numerical failures as opposed to rejected input.
inline bool is_numerical(ErrorCode c) {
    return c == ErrorCode::NoFiniteTail || c == ErrorCode::QuadratureFailure ||
           c == ErrorCode::BoundViolated;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) throw Error(code, what);
}

} // namespace sqz
