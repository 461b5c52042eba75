#pragma once

#include <stdexcept>
#include <string>

namespace hrlab {

// Every refusal the library can issue, one code per contract violation.
enum class ErrorCode {
    NotNormal,
    NoConvergence,
    DomainError,
    NotOrthonormal,
    NotHermitian,
    ClusterAmbiguity,
    InvalidPovm,
    AllDiagonal,
    NotSeparating,
    LpInfeasible,
    DividesViolation,
    GcdViolation,
    BetaSumViolation,
    PairMismatch,
    IndexOverflow,
    ProbeUnsafe,
    RegimeError,
    BoundaryPoint,
    NotContraction,
    NotPsd,
    ShapeMismatch,
    NotProjection,
    SigmaViolation,
    InvalidArgument,
    ParseError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotNormal: return "NotNormal";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NotOrthonormal: return "NotOrthonormal";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::ClusterAmbiguity: return "ClusterAmbiguity";
        case ErrorCode::InvalidPovm: return "InvalidPovm";
        case ErrorCode::AllDiagonal: return "AllDiagonal";
        case ErrorCode::NotSeparating: return "NotSeparating";
        case ErrorCode::LpInfeasible: return "LpInfeasible";
        case ErrorCode::DividesViolation: return "DividesViolation";
        case ErrorCode::GcdViolation: return "GcdViolation";
        case ErrorCode::BetaSumViolation: return "BetaSumViolation";
        case ErrorCode::PairMismatch: return "PairMismatch";
        case ErrorCode::IndexOverflow: return "IndexOverflow";
        case ErrorCode::ProbeUnsafe: return "ProbeUnsafe";
        case ErrorCode::RegimeError: return "RegimeError";
        case ErrorCode::BoundaryPoint: return "BoundaryPoint";
        case ErrorCode::NotContraction: return "NotContraction";
        case ErrorCode::NotPsd: return "NotPsd";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NotProjection: return "NotProjection";
        case ErrorCode::SigmaViolation: return "SigmaViolation";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

} // namespace hrlab
