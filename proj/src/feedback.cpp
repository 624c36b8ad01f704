#include "passnode/feedback.hpp"

#include <cmath>
#include <limits>

#include "passnode/linalg.hpp"

namespace passnode {

StateSpaceNode diagonal_transform_unchecked(const StateSpaceNode& node, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    if (!node.square()) throw Error(ErrorCode::NotSquare, "diagonal transform needs p == m");
    const Eigen::Index m = node.m();
    const Mat I = Mat::Identity(m, m);
    const Mat inv = linalg::checked_inverse(I + k * node.D(), ErrorCode::SingularIPlusKD);
    const double g = std::sqrt(2.0 * k);
    Mat A = node.A() - k * node.B() * inv * node.C();
    Mat B = g * node.B() * inv;
    Mat C = -g * inv * node.C();
    Mat D = inv * (I - k * node.D());
    return StateSpaceNode(std::move(A), std::move(B), std::move(C), std::move(D), node.W(), node.meta());
}

StateSpaceNode diagonal_transform(const StateSpaceNode& node, double k) {
    if (!node.square()) throw Error(ErrorCode::NotSquare, "diagonal transform needs p == m");
    if (!check_impedance(node).passive()) {
        throw Error(ErrorCode::NotImpedancePassive, "diagonal transform needs an impedance passive node");
    }
    return diagonal_transform_unchecked(node, k);
}

std::pair<Vec, Vec> scattering_signals(const Vec& up, const Vec& yp, double k) {
    if (up.size() != yp.size()) throw Error(ErrorCode::DimensionMismatch, "u and y differ in length");
    const double r = std::sqrt(0.5 * k);
    return {r * (up / k + yp), r * (up / k - yp)};
}

StateSpaceNode output_feedback(const StateSpaceNode& node, const Mat& K) {
    if (K.rows() != node.m() || K.cols() != node.p()) {
        throw Error(ErrorCode::DimensionMismatch, "K must be m x p");
    }
    const Mat Ip = Mat::Identity(node.p(), node.p());
    const Mat Im = Mat::Identity(node.m(), node.m());
    const Mat inv_dk = linalg::checked_inverse(Ip - node.D() * K, ErrorCode::SingularIMinusKD);
    const Mat inv_kd = linalg::checked_inverse(Im - K * node.D(), ErrorCode::SingularIMinusKD);
    Mat A = node.A() + node.B() * K * inv_dk * node.C();
    Mat B = node.B() * inv_kd;
    Mat C = inv_dk * node.C();
    Mat D = node.D() * inv_kd;
    return StateSpaceNode(std::move(A), std::move(B), std::move(C), std::move(D), node.W(), node.meta());
}

FeedbackSynthesis stabilizing_feedback(const StateSpaceNode& node, const Mat& E, double kappa) {
    if (!node.square()) throw Error(ErrorCode::NotSquare, "feedback needs p == m");
    if (E.rows() != node.m() || E.cols() != node.m()) throw Error(ErrorCode::DimensionMismatch, "E must be m x m");
    const PositivePart pp = positive_part(E);
    if (!(kappa > 0.0) || !(kappa < pp.kappa0)) {
        throw Error(ErrorCode::KappaOutOfRange, "kappa must lie in (0, kappa0)");
    }
    if (!check_impedance(shift_feedthrough(node, E)).passive()) {
        throw Error(ErrorCode::NotAlmostPassive, "shifted node is not impedance passive");
    }
    const double c = pp.c;
    const Eigen::Index m = node.m();
    const Mat I = Mat::Identity(m, m);

    FeedbackSynthesis fs{E, c, pp.kappa0, kappa, 0.0, 0.0, 0.0, node, node};
    fs.k = kappa / (1.0 - kappa * c);
    fs.alpha = std::sqrt(2.0 * kappa * (1.0 - kappa * c));
    fs.beta = (1.0 - 2.0 * kappa * c) / fs.alpha;

    // Σ_{cI} is impedance passive because cI >= E.
    const StateSpaceNode plant = shift_feedthrough(node, c * I);
    fs.scattering_intermediate = diagonal_transform_unchecked(plant, fs.k);
    const StateSpaceNode& s = fs.scattering_intermediate;
    const double a = fs.alpha;
    fs.closed_loop = StateSpaceNode(s.A(), s.B() / a, -s.C() / a, (fs.beta / a) * I - s.D() / (a * a), node.W(),
                                    node.meta());
    return fs;
}

}  // namespace passnode
