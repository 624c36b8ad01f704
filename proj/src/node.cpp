#include "passnode/node.hpp"

#include <algorithm>

#include "passnode/linalg.hpp"

namespace passnode {

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) throw Error(code, what);
}

bool all_finite(const Mat& m) { return m.allFinite(); }

}  // namespace

StateSpaceNode::StateSpaceNode(Mat A, Mat B, Mat C, Mat D, std::optional<Mat> W, std::string meta)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)), meta_(std::move(meta)) {
    const Eigen::Index n = A_.rows();
    require(A_.cols() == n, ErrorCode::DimensionMismatch, "A must be square");
    require(B_.rows() == n, ErrorCode::DimensionMismatch, "B must have n rows");
    require(C_.cols() == n, ErrorCode::DimensionMismatch, "C must have n columns");
    require(D_.rows() == C_.rows() && D_.cols() == B_.cols(), ErrorCode::DimensionMismatch,
            "D must be p x m");
    require(all_finite(A_) && all_finite(B_) && all_finite(C_) && all_finite(D_),
            ErrorCode::InvalidArgument, "non-finite matrix entry");

    if (W) {
        require(W->rows() == n && W->cols() == n, ErrorCode::DimensionMismatch, "W must be n x n");
        require(all_finite(*W), ErrorCode::InvalidArgument, "non-finite entry in W");
        const double scale = 1.0 + linalg::norm2(*W);
        require(linalg::skew_defect(*W) <= tolerances().structural * scale, ErrorCode::NotSelfAdjoint,
                "W must be self-adjoint");
        W_ = linalg::hermitian_part(*W);
        identity_weight_ = W_ == Mat::Identity(n, n);
    } else {
        W_ = Mat::Identity(n, n);
        identity_weight_ = true;
    }

    if (identity_weight_) {
        L_ = Mat::Identity(n, n);
        ortho_ = {A_, B_, C_, D_};
        return;
    }

    Eigen::LLT<Mat> llt(W_);
    require(llt.info() == Eigen::Success, ErrorCode::NotPositiveDefinite,
            "W must be positive definite");
    L_ = llt.matrixL();
    const double min_diag = L_.diagonal().real().minCoeff();
    require(min_diag > 0.0, ErrorCode::NotPositiveDefinite, "W must be positive definite");

    const Mat U = L_.adjoint();
    const auto lower = L_.triangularView<Eigen::Lower>();
    const Mat UA = U * A_;
    ortho_.A = lower.solve(UA.adjoint()).adjoint();
    ortho_.B = U * B_;
    ortho_.C = lower.solve(C_.adjoint()).adjoint();
    ortho_.D = D_;
}

Vec StateSpaceNode::to_orthonormal(const Vec& x) const {
    if (identity_weight_) return x;
    return L_.adjoint() * x;
}

Vec StateSpaceNode::from_orthonormal(const Vec& x) const {
    if (identity_weight_) return x;
    const Mat U = L_.adjoint();
    return U.triangularView<Eigen::Upper>().solve(x);
}

Mat StateSpaceNode::state_operator_from_orthonormal(const Mat& x) const {
    if (identity_weight_) return x;
    const Mat U = L_.adjoint();
    return U.triangularView<Eigen::Upper>().solve(x * U);
}

double StateSpaceNode::energy(const Vec& x) const { return (x.adjoint() * W_ * x)(0, 0).real(); }

Mat StateSpaceNode::A_adjoint() const {
    if (identity_weight_) return A_.adjoint();
    return state_operator_from_orthonormal(ortho_.A.adjoint());
}

StateSpaceNode StateSpaceNode::with_meta(std::string meta) const {
    StateSpaceNode copy = *this;
    copy.meta_ = std::move(meta);
    return copy;
}

StateSpaceNode node_from_orthonormal(const Realization& ortho, const Mat& W, std::string meta) {
    const Eigen::Index n = ortho.A.rows();
    require(W.rows() == n && W.cols() == n, ErrorCode::DimensionMismatch, "W must be n x n");
    if (W == Mat::Identity(n, n)) return StateSpaceNode(ortho.A, ortho.B, ortho.C, ortho.D, W, std::move(meta));
    Eigen::LLT<Mat> llt(linalg::hermitian_part(W));
    require(llt.info() == Eigen::Success, ErrorCode::NotPositiveDefinite, "W must be positive definite");
    const Mat U = llt.matrixU();
    const auto upper = U.triangularView<Eigen::Upper>();
    Mat A = upper.solve(ortho.A * U);
    Mat B = upper.solve(ortho.B);
    Mat C = ortho.C * U;
    return StateSpaceNode(std::move(A), std::move(B), std::move(C), ortho.D, W, std::move(meta));
}

Mat eval_transfer(const StateSpaceNode& node, cplx s) {
    return node.C() * linalg::resolvent_solve(node.A(), s, node.B()) + node.D();
}

StateSpaceNode dual_node(const StateSpaceNode& node) {
    // In orthonormal coordinates the dual is the plain conjugate transpose.
    const Realization& o = node.orthonormal();
    Realization d{o.A.adjoint(), o.C.adjoint(), o.B.adjoint(), o.D.adjoint()};
    return node_from_orthonormal(d, node.W(), node.meta());
}

StateSpaceNode shift_feedthrough(const StateSpaceNode& node, const Mat& E) {
    require(node.square(), ErrorCode::DimensionMismatch, "feedthrough shift needs p == m");
    require(E.rows() == node.m() && E.cols() == node.m(), ErrorCode::DimensionMismatch,
            "E must be m x m");
    return StateSpaceNode(node.A(), node.B(), node.C(), node.D() + E, node.W(), node.meta());
}

double default_beta(const StateSpaceNode& node) {
    const double abscissa = node.n() == 0 ? 0.0 : linalg::spectral_abscissa(node.A());
    return 1.0 + std::max(0.0, abscissa);
}

Vec apply_combined_observation(const StateSpaceNode& node, const Vec& x, const Vec& v,
                               std::optional<double> beta) {
    require(x.size() == node.n(), ErrorCode::DimensionMismatch, "x must have n entries");
    require(v.size() == node.m(), ErrorCode::DimensionMismatch, "v must have m entries");
    auto evaluate = [&](double b) -> Vec {
        const Mat bv = node.B() * v;
        const Vec r = linalg::resolvent_solve(node.A(), b, bv);
        return node.C() * (x - r) + eval_transfer(node, b) * v;
    };
    if (beta) return evaluate(*beta);
    const double b0 = default_beta(node);
    try {
        return evaluate(b0);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularResolvent) throw;
        return evaluate(b0 + 1.0);
    }
}

double dissipation_defect(const StateSpaceNode& node) {
    if (node.n() == 0) return 0.0;
    const Mat& a = node.orthonormal().A;
    Eigen::SelfAdjointEigenSolver<Mat> es(a + a.adjoint(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

bool generates_contraction(const StateSpaceNode& node) {
    if (node.n() == 0) return true;
    const Mat& a = node.orthonormal().A;
    const Mat form = -(a + a.adjoint());
    return linalg::is_psd(form, tolerances().psd);
}

}  // namespace passnode
