#pragma once

#include <vector>

#include "passnode/types.hpp"

// Dense helpers shared by the analysis modules. All matrices are complex.
namespace passnode::linalg {

Mat hermitian_part(const Mat& m);

/// ||m - m^H||, the distance from self-adjointness.
double skew_defect(const Mat& m);

/// Largest singular value.
double norm2(const Mat& m);

struct MinEigen {
    double value = 0.0;
    Vec vector;
};

/// Smallest eigenpair of a Hermitian matrix (the Hermitian part is used).
MinEigen min_eigen(const Mat& hermitian);

/// Operator norm of a Hermitian matrix.
double hermitian_norm(const Mat& hermitian);

/// Scale-invariant PSD acceptance: λ_min >= -rel_tol * (1 + ||form||).
bool is_psd(const Mat& form, double rel_tol);

/// Orthonormal basis (columns) of ker(m): right singular vectors whose singular
/// value is <= threshold. Returns an n x 0 matrix for a trivial kernel.
Mat null_space(const Mat& m, double threshold);

/// Orthonormal basis of range(m), rank decided by threshold.
Mat orth(const Mat& m, double threshold);

/// Orthonormal basis of span(v1) ∩ span(v2) for orthonormal inputs, computed as
/// the kernel of [v1, -v2] with singular values below `angle_tol` counted as zero.
Mat intersect(const Mat& v1, const Mat& v2, double angle_tol);

/// Solves (s I - a) x = rhs; throws `code` when s I - a is singular to working
/// precision.
Mat resolvent_solve(const Mat& a, cplx s, const Mat& rhs,
                    ErrorCode code = ErrorCode::SingularResolvent);

/// Row-side solve x (s I - a) = lhs.
Mat resolvent_solve_left(const Mat& lhs, const Mat& a, cplx s,
                         ErrorCode code = ErrorCode::SingularResolvent);

/// Inverse of a square matrix with the same singularity gate.
Mat checked_inverse(const Mat& m, ErrorCode code);

/// Whether s I - a is invertible to working precision.
bool in_resolvent_set(const Mat& a, cplx s);

std::vector<cplx> eigenvalues(const Mat& a);

/// max Re λ(a); -inf for an empty matrix.
/// Invertibility test with the condition number taken relative to
/// max(||m||_1, scale).
bool well_conditioned(const Mat& m, double scale);

double spectral_abscissa(const Mat& a);

}  // namespace passnode::linalg
