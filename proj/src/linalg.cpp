#include "passnode/linalg.hpp"

#include <algorithm>
#include <limits>

namespace passnode::linalg {

Mat hermitian_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

double skew_defect(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return norm2(m - m.adjoint());
}

double norm2(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

MinEigen min_eigen(const Mat& hermitian) {
    MinEigen out;
    if (hermitian.rows() == 0) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian));
    out.value = es.eigenvalues()(0);
    out.vector = es.eigenvectors().col(0);
    return out;
}

double hermitian_norm(const Mat& hermitian) {
    if (hermitian.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_psd(const Mat& form, double rel_tol) {
    if (form.rows() == 0) return true;
    return min_eigen(form).value >= -rel_tol * (1.0 + hermitian_norm(form));
}

Mat null_space(const Mat& m, double threshold) {
    const Eigen::Index n = m.cols();
    if (n == 0) return Mat(0, 0);
    if (m.rows() == 0) return Mat::Identity(n, n);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > threshold) ++rank;
    }
    return svd.matrixV().rightCols(n - rank);
}

Mat orth(const Mat& m, double threshold) {
    if (m.cols() == 0) return Mat(m.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > threshold) ++rank;
    }
    return svd.matrixU().leftCols(rank);
}

Mat intersect(const Mat& v1, const Mat& v2, double angle_tol) {
    const Eigen::Index n = v1.rows();
    if (v1.cols() == 0 || v2.cols() == 0) return Mat(n, 0);
    Mat stacked(n, v1.cols() + v2.cols());
    stacked << v1, -v2;
    const Mat ker = null_space(stacked, angle_tol);
    if (ker.cols() == 0) return Mat(n, 0);
    const Mat vecs = v1 * ker.topRows(v1.cols());
    return orth(vecs, 0.5);
}

namespace {

double one_norm(const Mat& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

// Reciprocal condition measured against max(||m||_1, scale), so a matrix that is
// tiny relative to the data it was formed from counts as singular.
double scaled_rcond(const Eigen::PartialPivLU<Mat>& lu, const Mat& m, double scale) {
    const double nm = one_norm(m);
    if (!(nm > 0.0)) return 0.0;
    return lu.rcond() * nm / std::max(nm, scale);
}

Eigen::PartialPivLU<Mat> checked_lu(const Mat& m, ErrorCode code, const char* what, double scale = 0.0) {
    Eigen::PartialPivLU<Mat> lu(m);
    const double rc = scaled_rcond(lu, m, scale);
    if (!(rc > tolerances().resolvent_rcond)) {
        throw Error(code, std::string(what) + " is singular to working precision (rcond=" +
                              std::to_string(rc) + ")");
    }
    return lu;
}

Mat shifted(const Mat& a, cplx s) {
    Mat m = -a;
    m.diagonal().array() += s;
    return m;
}

}  // namespace

Mat resolvent_solve(const Mat& a, cplx s, const Mat& rhs, ErrorCode code) {
    if (a.rows() == 0) return Mat(0, rhs.cols());
    return checked_lu(shifted(a, s), code, "sI - A", one_norm(a) + std::abs(s)).solve(rhs);
}

Mat resolvent_solve_left(const Mat& lhs, const Mat& a, cplx s, ErrorCode code) {
    if (a.rows() == 0) return Mat(lhs.rows(), 0);
    // x (sI - A) = lhs  <=>  (sI - A)^H x^H = lhs^H
    const Mat t = shifted(a, s).adjoint();
    return checked_lu(t, code, "sI - A", one_norm(a) + std::abs(s)).solve(lhs.adjoint()).adjoint();
}

Mat checked_inverse(const Mat& m, ErrorCode code) {
    if (m.rows() == 0) return Mat(0, 0);
    return checked_lu(m, code, "matrix").inverse();
}

bool in_resolvent_set(const Mat& a, cplx s) {
    if (a.rows() == 0) return true;
    const Mat m = shifted(a, s);
    Eigen::PartialPivLU<Mat> lu(m);
    return scaled_rcond(lu, m, one_norm(a) + std::abs(s)) > tolerances().resolvent_rcond;
}

std::vector<cplx> eigenvalues(const Mat& a) {
    std::vector<cplx> out;
    if (a.rows() == 0) return out;
    Eigen::ComplexEigenSolver<Mat> es(a, false);
    out.reserve(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

bool well_conditioned(const Mat& m, double scale) {
    if (m.rows() == 0) return true;
    Eigen::PartialPivLU<Mat> lu(m);
    return scaled_rcond(lu, m, scale) > tolerances().resolvent_rcond;
}

double spectral_abscissa(const Mat& a) {
    double best = -std::numeric_limits<double>::infinity();
    for (const cplx& l : eigenvalues(a)) best = std::max(best, l.real());
    return best;
}

}  // namespace passnode::linalg
