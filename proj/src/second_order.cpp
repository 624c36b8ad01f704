#include "passnode/second_order.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "passnode/linalg.hpp"

namespace passnode {

namespace {

Mat block2(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
    Mat out(a.rows() + c.rows(), a.cols() + b.cols());
    out << a, b, c, d;
    return out;
}

Mat weight(const Mat& A0) {
    const Eigen::Index n = A0.rows();
    return block2(A0, Mat::Zero(n, n), Mat::Zero(n, n), Mat::Identity(n, n));
}

Mat state_operator(const Mat& A0, const Mat& M) {
    const Eigen::Index n = A0.rows();
    return block2(Mat::Zero(n, n), Mat::Identity(n, n), -A0, -M);
}

Mat a0_inverse(const Mat& A0) { return linalg::checked_inverse(A0, ErrorCode::SingularA0); }

}  // namespace

void validate_plant(const SecondOrderPlant& plant) {
    const Eigen::Index n = plant.A0.rows();
    auto dims = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorCode::DimensionMismatch, what);
    };
    dims(plant.A0.cols() == n, "A0 must be square");
    dims(plant.M.rows() == n && plant.M.cols() == n, "M must be n x n");
    dims(plant.C0.cols() == n, "C0 must have n columns");
    if (plant.B0) dims(plant.B0->rows() == n && plant.B0->cols() == plant.C0.rows(), "B0 must be n x m0");
    if (plant.C1) dims(plant.C1->cols() == n, "C1 must have n columns");

    const double tol = tolerances().structural;
    if (linalg::skew_defect(plant.A0) > tol * (1.0 + linalg::norm2(plant.A0))) {
        throw Error(ErrorCode::NotSelfAdjoint, "A0 must be self-adjoint");
    }
    if (linalg::skew_defect(plant.M) > tol * (1.0 + linalg::norm2(plant.M))) {
        throw Error(ErrorCode::NotSelfAdjoint, "M must be self-adjoint");
    }
    if (n > 0) {
        const double a0_min = linalg::min_eigen(plant.A0).value;
        const double a0_tol = tol * linalg::hermitian_norm(plant.A0);
        if (a0_min < -a0_tol) throw Error(ErrorCode::NotPositiveDefinite, "A0 must be positive definite");
        if (!(a0_min > a0_tol)) {
            throw Error(ErrorCode::SingularA0, "A0 must be positive definite");
        }
        if (!linalg::is_psd(plant.M, tolerances().psd)) {
            throw Error(ErrorCode::NotPositiveDefinite, "M must be positive semidefinite");
        }
    }
}

StateSpaceNode build_colocated(const SecondOrderPlant& plant) {
    validate_plant(plant);
    const Eigen::Index n = plant.A0.rows();
    const Eigen::Index m = plant.C0.rows();
    Mat B(2 * n, m);
    B << Mat::Zero(n, m), plant.C0.adjoint();
    Mat C(m, 2 * n);
    C << Mat::Zero(m, n), plant.C0;
    return StateSpaceNode(state_operator(plant.A0, plant.M), std::move(B), std::move(C), Mat::Zero(m, m),
                          weight(plant.A0), "colocated");
}

ShiftedNode build_noncolocated(const SecondOrderPlant& plant) {
    validate_plant(plant);
    const Eigen::Index n = plant.A0.rows();
    const Eigen::Index m = plant.C0.rows();
    const Mat B0 = plant.B0 ? *plant.B0 : Mat(plant.C0.adjoint());
    const Mat m_inv = linalg::checked_inverse(plant.M, ErrorCode::SingularM);
    Mat B(2 * n, m);
    B << Mat::Zero(n, m), B0;
    Mat C(m, 2 * n);
    C << Mat::Zero(m, n), plant.C0;
    const Mat diff = plant.C0 - B0.adjoint();
    Mat E = linalg::hermitian_part(0.25 * diff * m_inv * diff.adjoint());
    StateSpaceNode node(state_operator(plant.A0, plant.M), std::move(B), std::move(C), Mat::Zero(m, m),
                        weight(plant.A0), "noncolocated");
    return {std::move(node), std::move(E)};
}

ShiftedNode build_two_channel(const SecondOrderPlant& plant) {
    if (!plant.C1) throw Error(ErrorCode::InvalidArgument, "two-channel plant needs C1");
    validate_plant(plant);
    const Eigen::Index n = plant.A0.rows();
    const Eigen::Index m0 = plant.C0.rows();
    const Mat& C0 = plant.C0;
    const Mat& C1 = *plant.C1;
    const Eigen::Index m1 = C1.rows();
    const Mat inv = a0_inverse(plant.A0);
    const Mat C2 = C1 * inv * plant.M;
    const Mat D0 = C0 * inv * C1.adjoint();
    const Mat D1 = C1 * inv * C0.adjoint();
    const Mat D2 = C2 * inv * C1.adjoint();

    const Mat B = block2(Mat::Zero(n, m0), inv * C1.adjoint(), C0.adjoint(), Mat::Zero(n, m1));
    const Mat C = block2(Mat::Zero(m0, n), C0, C1, 2.0 * C2);
    const Mat D = block2(Mat::Zero(m0, m0), D0, Mat::Zero(m1, m0), D2);
    const Mat E = -0.5 * block2(Mat::Zero(m0, m0), D1.adjoint(), D1, Mat::Zero(m1, m1));
    StateSpaceNode node(state_operator(plant.A0, plant.M), B, C, D, weight(plant.A0), "two_channel");
    return {std::move(node), E};
}

double BeamMode::value(double x) const {
    const double b = beta;
    switch (family) {
        case ModeFamily::Translation:
            return scale;
        case ModeFamily::Rotation:
            return scale * x;
        case ModeFamily::Symmetric:
            return scale * (std::cos(b * x) + std::cos(b) / std::cosh(b) * std::cosh(b * x));
        case ModeFamily::Antisymmetric:
            return scale * (std::sin(b * x) + std::sin(b) / std::sinh(b) * std::sinh(b * x));
    }
    return 0.0;
}

double BeamMode::slope(double x) const {
    const double b = beta;
    switch (family) {
        case ModeFamily::Translation:
            return 0.0;
        case ModeFamily::Rotation:
            return scale;
        case ModeFamily::Symmetric:
            return scale * b * (-std::sin(b * x) + std::cos(b) / std::cosh(b) * std::sinh(b * x));
        case ModeFamily::Antisymmetric:
            return scale * b * (std::cos(b * x) + std::sin(b) / std::sinh(b) * std::cosh(b * x));
    }
    return 0.0;
}

std::vector<double> free_free_betas(int count) {
    std::vector<double> out;
    if (count <= 0) return out;
    const double pi = std::numbers::pi;
    // g(x) = cos x - 1/cosh x has exactly one root in (kπ, (k+1)π) for k >= 1.
    auto g = [](double x) { return std::cos(x) - 1.0 / std::cosh(x); };
    for (int k = 1; k <= count; ++k) {
        double lo = k * pi;
        double hi = (k + 1) * pi;
        double glo = g(lo);
        const double ghi = g(hi);
        if (!(glo * ghi < 0.0)) throw Error(ErrorCode::RootFindingFailure, "mode bracket has no sign change");
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = g(mid);
            if (gm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((gm < 0.0) == (glo < 0.0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        const double x = 0.5 * (lo + hi);
        if (!std::isfinite(x)) throw Error(ErrorCode::RootFindingFailure, "bisection diverged");
        out.push_back(0.5 * x);  // 2β = x
    }
    return out;
}

std::vector<BeamMode> free_free_modes(int n_modes, double rho_a) {
    if (n_modes < 2) throw Error(ErrorCode::InvalidArgument, "n_modes must be at least 2");
    if (!(rho_a > 0.0)) throw Error(ErrorCode::InvalidArgument, "rho_a must be positive");
    const double mass = 1.0 / std::sqrt(rho_a);
    std::vector<BeamMode> modes;
    modes.push_back({ModeFamily::Translation, 0.0, 0.0, mass / std::sqrt(2.0)});
    modes.push_back({ModeFamily::Rotation, 0.0, 0.0, mass * std::sqrt(1.5)});

    const int flexible = n_modes - 2;
    const std::vector<double> betas = free_free_betas(flexible);
    constexpr int panels = 20000;
    for (double b : betas) {
        const double sym = std::sin(b) + std::cos(b) * std::tanh(b);
        const double anti = std::sin(b) - std::cos(b) * std::tanh(b);
        BeamMode mode{std::abs(sym) < std::abs(anti) ? ModeFamily::Symmetric : ModeFamily::Antisymmetric, b,
                      std::pow(b, 4), 1.0};
        // Simpson on (-1, 1).
        const double h = 2.0 / panels;
        double acc = 0.0;
        for (int i = 0; i <= panels; ++i) {
            const double x = -1.0 + i * h;
            const double v = mode.value(x);
            const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc += w * v * v;
        }
        acc *= h / 3.0;
        mode.scale = mass / std::sqrt(acc);
        modes.push_back(mode);
    }
    return modes;
}

BeamModel beam_model(const BeamParameters& params) {
    if (!(params.EI > 0.0) || !(params.EbarI >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "EI must be positive and EbarI non-negative");
    }
    std::vector<BeamMode> modes = free_free_modes(params.n_modes, params.rho_a);
    const Eigen::Index nm = params.n_modes;
    const Eigen::Index nf = nm - 2;

    SecondOrderPlant plant;
    plant.A0 = Mat::Zero(nm, nm);
    plant.M = Mat::Zero(nm, nm);
    plant.C0 = Mat::Zero(2, nm);
    for (Eigen::Index k = 0; k < nm; ++k) {
        const BeamMode& mode = modes[static_cast<std::size_t>(k)];
        plant.A0(k, k) = params.EI / params.rho_a * mode.lambda;
        plant.M(k, k) = params.EbarI / params.rho_a * mode.lambda;
        plant.C0(0, k) = mode.value(0.0);
        plant.C0(1, k) = mode.slope(0.0);
    }

    // State (q_flex, q'), rigid modes first in q'.
    const Eigen::Index n = nf + nm;
    const Mat a0f = plant.A0.bottomRightCorner(nf, nf);
    Mat A = Mat::Zero(n, n);
    A.block(0, nf + 2, nf, nf) = Mat::Identity(nf, nf);
    A.block(nf + 2, 0, nf, nf) = -a0f;
    A.bottomRightCorner(nm, nm) = -plant.M;
    Mat B = Mat::Zero(n, 2);
    B.bottomRows(nm) = plant.C0.adjoint();
    Mat C = Mat::Zero(2, n);
    C.rightCols(nm) = plant.C0;
    Mat W = Mat::Identity(n, n);
    W.topLeftCorner(nf, nf) = a0f;
    StateSpaceNode node(std::move(A), std::move(B), std::move(C), Mat::Zero(2, 2), std::move(W), "bontsema_beam");
    return {std::move(node), std::move(plant), std::move(modes)};
}

std::string_view to_string(ModeFamily family) {
    switch (family) {
        case ModeFamily::Translation: return "translation";
        case ModeFamily::Rotation: return "rotation";
        case ModeFamily::Symmetric: return "symmetric";
        case ModeFamily::Antisymmetric: return "antisymmetric";
    }
    return "translation";
}

}  // namespace passnode
