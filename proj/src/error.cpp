#include "chiral/error.hpp"

namespace chiral {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::CriticalPointSingularity: return "CriticalPointSingularity";
        case ErrorCode::InsufficientGrid: return "InsufficientGrid";
        case ErrorCode::MixedSides: return "MixedSides";
        case ErrorCode::TruncationLeakage: return "TruncationLeakage";
        case ErrorCode::SolverFailure: return "SolverFailure";
        case ErrorCode::NonHermitianInput: return "NonHermitianInput";
        case ErrorCode::CutoffCeiling: return "CutoffCeiling";
        case ErrorCode::UnnormalizedState: return "UnnormalizedState";
        case ErrorCode::TailTooHeavy: return "TailTooHeavy";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace chiral
