#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <random>

#include "passnode/linalg.hpp"
#include "passnode/node.hpp"
#include "passnode/passivity.hpp"
#include "passnode/sim.hpp"

namespace testsupport {

using passnode::cplx;
using passnode::Mat;
using passnode::Realization;
using passnode::StateSpaceNode;
using passnode::Vec;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Mat randn(Eigen::Index r, Eigen::Index c, Rng& rng, bool complex_entries = true) {
    std::normal_distribution<double> nd;
    Mat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = cplx(nd(rng), complex_entries ? nd(rng) : 0.0);
    return m;
}

inline Mat random_hermitian(Eigen::Index n, Rng& rng) {
    const Mat x = randn(n, n, rng);
    return 0.5 * (x + x.adjoint());
}

inline Mat random_skew(Eigen::Index n, Rng& rng) {
    const Mat x = randn(n, n, rng);
    return 0.5 * (x - x.adjoint());
}

inline Mat random_weight(Eigen::Index n, Rng& rng) {
    const Mat f = randn(n, n, rng);
    return f * f.adjoint() / static_cast<double>(n) + 0.5 * Mat::Identity(n, n);
}

inline Mat random_unitary(Eigen::Index n, Rng& rng) {
    Eigen::HouseholderQR<Mat> qr(randn(n, n, rng));
    return qr.householderQ() * Mat::Identity(n, n);
}

/// Impedance passive by construction: the block form equals F F^H >= 0.
inline Realization random_passive_ortho(Eigen::Index n, Eigen::Index m, Rng& rng) {
    const Mat f = randn(n + m, n + m, rng) / std::sqrt(static_cast<double>(n + m));
    const Mat p = f * f.adjoint();
    Realization o;
    o.A = random_skew(n, rng) - 0.5 * p.topLeftCorner(n, n);
    o.B = randn(n, m, rng);
    o.C = o.B.adjoint() + p.bottomLeftCorner(m, n);
    o.D = 0.5 * p.bottomRightCorner(m, m) + random_skew(m, rng);
    return o;
}

inline StateSpaceNode random_passive_node(Eigen::Index n, Eigen::Index m, Rng& rng, bool weighted = true) {
    const Realization o = random_passive_ortho(n, m, rng);
    const Mat W = weighted ? random_weight(n, rng) : Mat(Mat::Identity(n, n));
    return passnode::node_from_orthonormal(o, W);
}

/// Not impedance passive. Variant 0 makes the feedthrough block of the form
/// negative definite, variant 1 the state block, variant 2 breaks the
/// coupling between them (re-drawn until the violation exceeds 1e-3).
inline StateSpaceNode random_nonpassive_node(Eigen::Index n, Eigen::Index m, Rng& rng, bool weighted = true,
                                             int variant = 0) {
    using passnode::linalg::hermitian_norm;
    Realization o = random_passive_ortho(n, m, rng);
    if (variant == 1) {
        const double top = hermitian_norm(o.A + o.A.adjoint());
        o.A += (0.5 * top + uniform(rng, 0.05, 0.5)) * Mat::Identity(n, n);
    } else if (variant == 2) {
        for (;;) {
            Realization t = o;
            t.C += 2.0 * randn(m, n, rng);
            const Mat form = passnode::impedance_block_form(t);
            if (passnode::linalg::min_eigen(form).value < -1e-3) {
                o = t;
                break;
            }
        }
    } else {
        const double top = hermitian_norm(o.D + o.D.adjoint());
        o.D -= (0.5 * top + uniform(rng, 0.05, 0.5)) * Mat::Identity(m, m);
    }
    const Mat W = weighted ? random_weight(n, rng) : Mat(Mat::Identity(n, n));
    return passnode::node_from_orthonormal(o, W);
}

/// Passive with a skew-adjoint generator: C = B*, D + D* >= 0.
inline StateSpaceNode random_lossless_node(Eigen::Index n, Eigen::Index m, Rng& rng) {
    Realization o;
    o.A = random_skew(n, rng);
    o.B = randn(n, m, rng);
    o.C = o.B.adjoint();
    const Mat f = randn(m, m, rng);
    o.D = 0.5 * f * f.adjoint() + random_skew(m, rng);
    return passnode::node_from_orthonormal(o, random_weight(n, rng));
}

struct AlmostPassive {
    StateSpaceNode node;
    Mat E;  // node shifted by E is impedance passive
};

/// E is Hermitian with at least one positive eigenvalue.
inline AlmostPassive random_almost_passive(Eigen::Index n, Eigen::Index m, Rng& rng) {
    const StateSpaceNode base = random_passive_node(n, m, rng);
    Mat E = random_hermitian(m, rng);
    if (passnode::linalg::min_eigen(-E).value >= 0.0) E += Mat::Identity(m, m);
    StateSpaceNode node(base.A(), base.B(), base.C(), base.D() - E, base.W());
    return {node, E};
}

/// Damped observable block plus an undamped block of frequency omega that
/// neither sees the input nor reaches the output, hidden by a random unitary
/// change of basis and a random weight.
struct DarkMode {
    StateSpaceNode node;
    double omega;
};

inline DarkMode dark_mode_node(Eigen::Index n_visible, Eigen::Index m, Rng& rng) {
    const Realization vis = random_passive_ortho(n_visible, m, rng);
    const double omega = uniform(rng, 0.5, 3.0);
    const Eigen::Index n = n_visible + 2;
    Realization o;
    o.A = Mat::Zero(n, n);
    o.A.topLeftCorner(n_visible, n_visible) = vis.A;
    o.A(n_visible, n_visible + 1) = omega;
    o.A(n_visible + 1, n_visible) = -omega;
    o.B = Mat::Zero(n, m);
    o.B.topRows(n_visible) = vis.B;
    o.C = Mat::Zero(m, n);
    o.C.leftCols(n_visible) = vis.C;
    o.D = vis.D;
    const Mat U = random_unitary(n, rng);
    Realization r{U * o.A * U.adjoint(), U * o.B, o.C * U.adjoint(), o.D};
    return {passnode::node_from_orthonormal(r, random_weight(n, rng)), omega};
}

/// Sum of a few sinusoids per channel, smooth on the whole line.
inline passnode::InputSignal random_smooth_input(Eigen::Index m, Rng& rng, int terms = 3) {
    std::vector<double> amp, freq, phase;
    std::vector<cplx> dir;
    for (Eigen::Index i = 0; i < m * terms; ++i) {
        amp.push_back(uniform(rng, -1.0, 1.0));
        freq.push_back(uniform(rng, 0.2, 3.0));
        phase.push_back(uniform(rng, 0.0, 6.283185307179586));
        dir.push_back(std::polar(1.0, uniform(rng, 0.0, 6.283185307179586)));
    }
    return [=](double t) {
        Vec v = Vec::Zero(m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (int k = 0; k < terms; ++k) {
                const auto j = static_cast<std::size_t>(i * terms + k);
                v(i) += amp[j] * dir[j] * std::sin(freq[j] * t + phase[j]);
            }
        return v;
    };
}

/// Error code thrown by f, empty when it returns normally.
inline std::optional<passnode::ErrorCode> error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const passnode::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

/// Row-major real matrix from a value list.
inline Mat mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> values) {
    Mat m(r, c);
    auto it = values.begin();
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = *it++;
    return m;
}

inline StateSpaceNode damped_oscillator(double d) {
    return StateSpaceNode(mat(2, 2, {0, 1, -1, -d}), mat(2, 1, {0, 1}), mat(1, 2, {0, 1}), Mat::Zero(1, 1));
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace testsupport
