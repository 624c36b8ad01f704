#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace passnode {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

enum class ErrorCode {
    DimensionMismatch,
    NotSelfAdjoint,
    NotPositiveDefinite,
    SingularResolvent,
    NotSquare,
    OmegaInSpectrum,
    ASSViolated,
    NotESAD,
    NotColocated,
    NotSelfAdjointDissipative,
    NotContraction,
    GridPointInSpectrum,
    AlphaInSpectrum,
    AlphaNotRightHalfPlane,
    MinusOneEigenvalue,
    NonPositiveAlpha,
    NotImpedancePassive,
    SingularIPlusKD,
    SingularIMinusKD,
    KappaOutOfRange,
    NotAlmostPassive,
    LambdaInOpenLoopSpectrum,
    SingularA0,
    SingularM,
    RootFindingFailure,
    NonFiniteState,
    InvalidArgument,
    ParseError,
    SchemaError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can report it without string matching.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

/// Numerical thresholds shared by all modules.
struct Tolerances {
    /// A Hermitian form F is accepted as PSD when λ_min(F) >= -psd * (1 + ||F||).
    double psd = 1e-9;
    /// Structural identities (colocation, self-adjointness, ESAD).
    double structural = 1e-10;
    /// Rank decisions and principal-angle thresholding for subspaces.
    double subspace = 1e-8;
    /// Energy audit slack, scaled by trajectory energy.
    double audit = 1e-6;
    /// Reciprocal condition number below which sI - A counts as singular.
    double resolvent_rcond = 1e-13;
};

/// Defaults, with `psd` overridden by the PASSIVE_NODE_TOL environment variable.
const Tolerances& tolerances();

}  // namespace passnode
