#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace algcurv {

enum class ErrorCode {
    MixedRings,
    ZeroPolynomial,
    UnknownVariable,
    SyntaxError,
    NonPolynomial,
    PointNotOnVariety,
    NonLinearTangentCone,
    OrderExhausted,
    PencilUnresolved,
    NoConvergence,
    NoBranch,
    InsufficientSamples,
    SingularPoint,
    BadInput,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::MixedRings: return "MixedRings";
        case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::NonPolynomial: return "NonPolynomial";
        case ErrorCode::PointNotOnVariety: return "PointNotOnVariety";
        case ErrorCode::NonLinearTangentCone: return "NonLinearTangentCone";
        case ErrorCode::OrderExhausted: return "OrderExhausted";
        case ErrorCode::PencilUnresolved: return "PencilUnresolved";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NoBranch: return "NoBranch";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::SingularPoint: return "SingularPoint";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

/// Library-wide exception. `offset` is meaningful only for SyntaxError.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string message, std::size_t offset = 0)
        : std::runtime_error(std::string(error_name(code)) + ": " + message),
          code_(code),
          offset_(offset) {}

    ErrorCode code() const noexcept { return code_; }
    std::size_t offset() const noexcept { return offset_; }

  private:
    ErrorCode code_;
    std::size_t offset_;
};

}  // namespace algcurv
