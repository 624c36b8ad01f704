#include "passnode/stability.hpp"

#include <algorithm>
#include <limits>

#include "passnode/linalg.hpp"

namespace passnode {

namespace {

double scaled(double tol, const Mat& m) { return tol * std::max(1.0, linalg::norm2(m)); }

// Largest subspace V of `start` with (I - VV^H) a_k V = 0 for every a_k.
Mat invariant_fixpoint(Mat v, const std::vector<const Mat*>& ops, double tol) {
    const Eigen::Index n = v.rows();
    for (Eigen::Index iter = 0; iter <= n && v.cols() > 0; ++iter) {
        const Mat proj = Mat::Identity(n, n) - v * v.adjoint();
        Mat stacked(n * static_cast<Eigen::Index>(ops.size()), v.cols());
        for (std::size_t i = 0; i < ops.size(); ++i) {
            stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = proj * (*ops[i]) * v;
        }
        const Mat ker = linalg::null_space(stacked, tol);
        if (ker.cols() == v.cols()) break;
        v = ker.cols() == 0 ? Mat(n, 0) : linalg::orth(v * ker, 0.5);
    }
    return v;
}

Mat to_original(const StateSpaceNode& node, const Mat& v) {
    if (node.has_identity_weight() || v.cols() == 0) return v;
    Mat out(v.rows(), v.cols());
    for (Eigen::Index j = 0; j < v.cols(); ++j) out.col(j) = node.from_orthonormal(v.col(j));
    return out;
}

Mat unobservable_ortho(const Mat& a, const Mat& c) {
    const Eigen::Index n = a.rows();
    if (n == 0) return Mat(0, 0);
    const double tol = tolerances().subspace;
    Mat v = c.rows() == 0 ? Mat(Mat::Identity(n, n)) : linalg::null_space(c, scaled(tol, c));
    if (v.cols() == 0) return Mat(n, 0);
    return invariant_fixpoint(v, {&a}, scaled(tol, a));
}

void require_contraction(const StateSpaceNode& node) {
    if (!generates_contraction(node)) {
        throw Error(ErrorCode::NotContraction, "A does not generate a contraction semigroup");
    }
}

Mat unitary_ortho(const StateSpaceNode& node) {
    const Realization& o = node.orthonormal();
    const Eigen::Index n = node.n();
    if (n == 0) return Mat(0, 0);
    const double tol = scaled(tolerances().subspace, o.A);
    const Mat q = o.A + o.A.adjoint();
    Mat v = linalg::null_space(q, tol);
    if (v.cols() == 0) return Mat(n, 0);
    const Mat ah = o.A.adjoint();
    return invariant_fixpoint(v, {&o.A, &ah}, tol);
}

}  // namespace

Mat unobservable_space(const StateSpaceNode& node) {
    const Realization& o = node.orthonormal();
    return to_original(node, unobservable_ortho(o.A, o.C));
}

Mat uncontrollable_dual_space(const StateSpaceNode& node) {
    const Realization& o = node.orthonormal();
    return to_original(node, unobservable_ortho(o.A.adjoint(), o.B.adjoint()));
}

Mat unitary_subspace(const StateSpaceNode& node) {
    require_contraction(node);
    return to_original(node, unitary_ortho(node));
}

BenchimolConditions benchimol_conditions(const StateSpaceNode& node) {
    require_contraction(node);
    const Realization& o = node.orthonormal();
    const Mat xu = unitary_ortho(node);
    const double tol = tolerances().subspace;
    BenchimolConditions out;
    out.cweak = linalg::intersect(unobservable_ortho(o.A, o.C), xu, tol).cols() == 0;
    out.bweak = linalg::intersect(unobservable_ortho(o.A.adjoint(), o.B.adjoint()), xu, tol).cols() == 0;
    return out;
}

std::vector<bool> closed_loop_spectrum_gate(const StateSpaceNode& node, const Mat& K,
                                            const std::vector<cplx>& lambdas) {
    if (K.rows() != node.m() || K.cols() != node.p()) throw Error(ErrorCode::DimensionMismatch, "K must be m x p");
    std::vector<bool> out;
    out.reserve(lambdas.size());
    const Mat I = Mat::Identity(node.m(), node.m());
    for (const cplx& l : lambdas) {
        if (!linalg::in_resolvent_set(node.A(), l)) {
            throw Error(ErrorCode::LambdaInOpenLoopSpectrum, "lambda lies in the spectrum of A");
        }
        const Mat g = eval_transfer(node, l);
        const Mat kg = K * g;
        out.push_back(linalg::well_conditioned(I - kg, 1.0 + kg.cwiseAbs().colwise().sum().maxCoeff()));
    }
    return out;
}

std::vector<double> imaginary_axis_eigenvalues(const Mat& A) {
    std::vector<double> out;
    const double tol = tolerances().psd * (1.0 + linalg::norm2(A));
    for (const cplx& l : linalg::eigenvalues(A)) {
        if (std::abs(l.real()) <= tol) out.push_back(l.imag());
    }
    std::sort(out.begin(), out.end());
    return out;
}

StabilityReport stability_verdict(const StateSpaceNode& node, const Mat& E, double kappa) {
    const FeedbackSynthesis fs = stabilizing_feedback(node, E, kappa);
    StabilityReport r;
    r.kappa = kappa;
    r.unobservable_basis = unobservable_space(node);
    r.uncontrollable_dual_basis = uncontrollable_dual_space(node);
    r.unitary_basis = unitary_subspace(node);
    const BenchimolConditions bc = benchimol_conditions(node);
    r.cweak_holds = bc.cweak;
    r.bweak_holds = bc.bweak;
    r.imaginary_spectrum = imaginary_axis_eigenvalues(node.A());
    const Mat& ak = fs.closed_loop.A();
    r.closed_loop_imaginary_spectrum = imaginary_axis_eigenvalues(ak);
    r.closed_loop_abscissa = node.n() == 0 ? -std::numeric_limits<double>::infinity()
                                           : linalg::spectral_abscissa(ak);
    const bool hurwitz = r.closed_loop_abscissa < 0.0 && r.closed_loop_imaginary_spectrum.empty();
    if (bc.cweak || bc.bweak) {
        r.verdict = hurwitz ? StabilityVerdict::StronglyStable : StabilityVerdict::Inconclusive;
    } else {
        r.verdict = r.closed_loop_imaginary_spectrum.empty() ? StabilityVerdict::Inconclusive
                                                             : StabilityVerdict::NotStable;
    }
    return r;
}

std::string_view to_string(StabilityVerdict verdict) {
    switch (verdict) {
        case StabilityVerdict::WeaklyStable: return "WeaklyStable";
        case StabilityVerdict::StronglyStable: return "StronglyStable";
        case StabilityVerdict::Inconclusive: return "Inconclusive";
        case StabilityVerdict::NotStable: return "NotStable";
    }
    return "Inconclusive";
}

}  // namespace passnode
