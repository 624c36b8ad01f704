#include "passnode/types.hpp"

#include <cstdlib>

namespace passnode {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::SingularResolvent: return "SingularResolvent";
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::OmegaInSpectrum: return "OmegaInSpectrum";
        case ErrorCode::ASSViolated: return "ASSViolated";
        case ErrorCode::NotESAD: return "NotESAD";
        case ErrorCode::NotColocated: return "NotColocated";
        case ErrorCode::NotSelfAdjointDissipative: return "NotSelfAdjointDissipative";
        case ErrorCode::NotContraction: return "NotContraction";
        case ErrorCode::GridPointInSpectrum: return "GridPointInSpectrum";
        case ErrorCode::AlphaInSpectrum: return "AlphaInSpectrum";
        case ErrorCode::AlphaNotRightHalfPlane: return "AlphaNotRightHalfPlane";
        case ErrorCode::MinusOneEigenvalue: return "MinusOneEigenvalue";
        case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
        case ErrorCode::NotImpedancePassive: return "NotImpedancePassive";
        case ErrorCode::SingularIPlusKD: return "SingularIPlusKD";
        case ErrorCode::SingularIMinusKD: return "SingularIMinusKD";
        case ErrorCode::KappaOutOfRange: return "KappaOutOfRange";
        case ErrorCode::NotAlmostPassive: return "NotAlmostPassive";
        case ErrorCode::LambdaInOpenLoopSpectrum: return "LambdaInOpenLoopSpectrum";
        case ErrorCode::SingularA0: return "SingularA0";
        case ErrorCode::SingularM: return "SingularM";
        case ErrorCode::RootFindingFailure: return "RootFindingFailure";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

const Tolerances& tolerances() {
    static const Tolerances tol = [] {
        Tolerances t;
        if (const char* env = std::getenv("PASSIVE_NODE_TOL")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end != env && v > 0.0) t.psd = v;
        }
        return t;
    }();
    return tol;
}

}  // namespace passnode
