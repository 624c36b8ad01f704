#include "passnode/cayley.hpp"

#include <algorithm>
#include <cmath>

#include "passnode/linalg.hpp"

namespace passnode {

DiscreteSystem::DiscreteSystem(Mat Ad, Mat Bd, Mat Cd, Mat Dd, cplx alpha, std::optional<Mat> W)
    : Ad_(std::move(Ad)), Bd_(std::move(Bd)), Cd_(std::move(Cd)), Dd_(std::move(Dd)), alpha_(alpha) {
    const Eigen::Index n = Ad_.rows();
    if (Ad_.cols() != n || Bd_.rows() != n || Cd_.cols() != n || Dd_.rows() != Cd_.rows() ||
        Dd_.cols() != Bd_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "inconsistent discrete-system dimensions");
    }
    if (!(alpha_.real() > 0.0)) throw Error(ErrorCode::AlphaNotRightHalfPlane, "Re alpha must be positive");
    W_ = W ? linalg::hermitian_part(*W) : Mat::Identity(n, n);
    if (W_.rows() != n || W_.cols() != n) throw Error(ErrorCode::DimensionMismatch, "W must be n x n");
}

Realization DiscreteSystem::orthonormal() const {
    const Eigen::Index n = this->n();
    if (W_ == Mat::Identity(n, n)) return {Ad_, Bd_, Cd_, Dd_};
    Eigen::LLT<Mat> llt(W_);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "W must be positive definite");
    const Mat U = llt.matrixU();
    const auto upper = U.triangularView<Eigen::Upper>();
    // X -> U X U^{-1}; right division through the transposed triangular solve.
    const Mat UA = U * Ad_;
    const Mat a = upper.adjoint().solve(UA.adjoint()).adjoint();
    const Mat c = upper.adjoint().solve(Cd_.adjoint()).adjoint();
    return {a, U * Bd_, c, Dd_};
}

DiscreteSystem internal_cayley(const StateSpaceNode& node, cplx alpha) {
    if (!(alpha.real() > 0.0)) throw Error(ErrorCode::AlphaNotRightHalfPlane, "Re alpha must be positive");
    const Eigen::Index n = node.n();
    const Mat R = linalg::resolvent_solve(node.A(), alpha, Mat::Identity(n, n), ErrorCode::AlphaInSpectrum);
    Mat num = node.A();
    num.diagonal().array() += std::conj(alpha);
    const double g = std::sqrt(2.0 * alpha.real());
    const Mat RB = R * node.B();
    return DiscreteSystem(num * R, g * RB, g * (node.C() * R), node.C() * RB + node.D(), alpha, node.W());
}

StateSpaceNode inverse_cayley(const DiscreteSystem& disc) {
    Mat ipad = disc.Ad();
    ipad.diagonal().array() += 1.0;
    const Mat inv = linalg::checked_inverse(ipad, ErrorCode::MinusOneEigenvalue);
    const double a = disc.alpha().real();
    const double g = std::sqrt(2.0 * a);
    Mat A = -2.0 * a * inv;
    A.diagonal().array() += disc.alpha();
    Mat B = g * inv * disc.Bd();
    Mat C = g * disc.Cd() * inv;
    Mat D = disc.Dd() - disc.Cd() * inv * disc.Bd();
    return StateSpaceNode(std::move(A), std::move(B), std::move(C), std::move(D), disc.W());
}

Mat discrete_transfer(const DiscreteSystem& disc, cplx z) {
    return disc.Cd() * linalg::resolvent_solve(disc.Ad(), z, disc.Bd()) + disc.Dd();
}

PassivityCertificate check_discrete_passivity(const DiscreteSystem& disc, PassivityKind kind) {
    const Realization o = disc.orthonormal();
    const Eigen::Index n = disc.n();
    const Eigen::Index m = disc.m();
    const Eigen::Index p = disc.p();
    Mat form;
    if (kind == PassivityKind::Scattering) {
        Mat big(n + p, n + m);
        big << o.A, o.B, o.C, o.D;
        form = Mat::Identity(n + m, n + m) - big.adjoint() * big;
    } else {
        if (m != p) throw Error(ErrorCode::NotSquare, "impedance passivity needs p == m");
        form.resize(n + m, n + m);
        form << Mat::Identity(n, n) - o.A.adjoint() * o.A, o.C.adjoint() - o.A.adjoint() * o.B,
            o.C - o.B.adjoint() * o.A, o.D + o.D.adjoint() - o.B.adjoint() * o.B;
    }
    PassivityCertificate cert;
    cert.kind = kind;
    const linalg::MinEigen me = linalg::min_eigen(form);
    cert.min_eigenvalue = me.value;
    const bool passive = linalg::is_psd(form, tolerances().psd);
    cert.verdict = passive ? Verdict::Passive : Verdict::NotPassive;
    if (!passive) cert.witness = me.vector;
    cert.checks.push_back({std::nullopt, me.value, passive});
    return cert;
}

std::vector<Vec> discrete_response(const DiscreteSystem& disc, std::span<const Vec> inputs) {
    std::vector<Vec> out;
    out.reserve(inputs.size());
    Vec z = Vec::Zero(disc.n());
    for (const Vec& u : inputs) {
        if (u.size() != disc.m()) throw Error(ErrorCode::DimensionMismatch, "input has wrong length");
        out.push_back(disc.Cd() * z + disc.Dd() * u);
        z = disc.Ad() * z + disc.Bd() * u;
    }
    return out;
}

std::vector<cplx> laguerre_functions(double t, cplx alpha, std::size_t K) {
    std::vector<cplx> f(K);
    if (K == 0) return f;
    const double a = alpha.real();
    const double x = 2.0 * a * t;
    // l_k = e^{-x/2} L_k(x) through the three-term recurrence.
    double lprev = std::exp(-0.5 * x);
    double lcur = (1.0 - x) * lprev;
    const cplx front = std::sqrt(2.0 * a) * std::exp(cplx(0.0, alpha.imag() * t));
    f[0] = front * lprev;
    if (K > 1) f[1] = -front * lcur;
    for (std::size_t k = 1; k + 1 < K; ++k) {
        const double kk = static_cast<double>(k);
        const double lnext = ((2.0 * kk + 1.0 - x) * lcur - kk * lprev) / (kk + 1.0);
        lprev = lcur;
        lcur = lnext;
        const double sign = ((k + 1) % 2 == 0) ? 1.0 : -1.0;
        f[k + 1] = sign * front * lcur;
    }
    return f;
}

std::vector<double> uniform_quadrature_weights(std::span<const double> times) {
    const std::size_t npts = times.size();
    std::vector<double> w(npts, 0.0);
    if (npts < 2) return w;
    const double h = (times.back() - times.front()) / static_cast<double>(npts - 1);
    for (std::size_t i = 1; i < npts; ++i) {
        const double step = times[i] - times[i - 1];
        if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h))) {
            throw Error(ErrorCode::InvalidArgument, "samples must lie on a uniform grid");
        }
    }
    std::size_t intervals = npts - 1;
    if (intervals == 1) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    // Simpson on an even number of leading intervals, 3/8 rule on a trailing
    // odd triple.
    std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (simpson_end != intervals) {
        const std::size_t i = simpson_end;
        w[i] += 3.0 * h / 8.0;
        w[i + 1] += 9.0 * h / 8.0;
        w[i + 2] += 9.0 * h / 8.0;
        w[i + 3] += 3.0 * h / 8.0;
    }
    return w;
}

std::vector<Vec> laguerre_coefficients(std::span<const double> times, std::span<const Vec> samples,
                                       cplx alpha, std::size_t K) {
    if (!(alpha.real() > 0.0)) throw Error(ErrorCode::NonPositiveAlpha, "Re alpha must be positive");
    if (times.size() != samples.size()) throw Error(ErrorCode::DimensionMismatch, "times and samples differ in length");
    const Eigen::Index m = samples.empty() ? 0 : samples.front().size();
    std::vector<Vec> coeffs(K, Vec::Zero(m));
    if (samples.empty()) return coeffs;
    const std::vector<double> w = uniform_quadrature_weights(times);
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (samples[j].size() != m) throw Error(ErrorCode::DimensionMismatch, "ragged samples");
        if (w[j] == 0.0) continue;
        const std::vector<cplx> f = laguerre_functions(times[j], alpha, K);
        for (std::size_t k = 0; k < K; ++k) coeffs[k] += (w[j] * std::conj(f[k])) * samples[j];
    }
    return coeffs;
}

}  // namespace passnode
