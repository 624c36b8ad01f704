// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "passnode/cayley.hpp"
#include "passnode/feedback.hpp"
#include "passnode/second_order.hpp"
#include "passnode/sim.hpp"
#include "passnode/stability.hpp"
#include "support.hpp"

using namespace passnode;
using namespace testsupport;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Eigen::Index dim(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double max_diff(const StateSpaceNode& a, const StateSpaceNode& b) {
    return std::max({max_abs(a.A() - b.A()), max_abs(a.B() - b.B()), max_abs(a.C() - b.C()),
                     max_abs(a.D() - b.D())});
}

bool verdict_of(const PassivityCertificate& c) { return c.passive(); }

double omega_in_resolvent(const StateSpaceNode& node) {
    for (double w : {0.0, 0.7, 1.3, 2.9}) {
        if (linalg::in_resolvent_set(node.A(), cplx(0.0, w))) return w;
    }
    return 5.3;
}

// 1. continuous (b) verdict = discrete Cayley verdict = reciprocal verdict.
Outcome criterion1() {
    Rng rng(101);
    int disagreements = 0, inconsistent = 0, passive = 0;
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index n = dim(rng, 2, 6), m = dim(rng, 1, 3);
        const StateSpaceNode node =
            i % 2 == 0 ? random_passive_node(n, m, rng) : random_nonpassive_node(n, m, rng, true, (i / 2) % 3);
        const PassivityCertificate cont = check_impedance(node);
        if (!cont.consistent() || cont.checks.size() < 5) ++inconsistent;
        const bool v_disc = verdict_of(check_discrete_passivity(internal_cayley(node, 1.0), PassivityKind::Impedance));
        const Mat zero = Mat::Zero(m, m);
        const bool v_rec = verdict_of(check_impedance_reciprocal(node, zero, omega_in_resolvent(node)));
        if (v_disc != cont.passive() || v_rec != cont.passive()) ++disagreements;
        passive += cont.passive();
    }
    return {disagreements == 0 && inconsistent == 0 && passive == 25,
            std::to_string(passive) + "/50 passive, " + std::to_string(disagreements) + " disagreements, " +
                std::to_string(inconsistent) + " test-point inconsistencies"};
}

// 2. Contraction generator, C = B*, bounded B => impedance passive.
Outcome criterion2() {
    Rng rng(202);
    int certified = 0;
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index n = dim(rng, 1, 8), m = dim(rng, 1, 3);
        const Mat f = randn(n, n, rng) * uniform(rng, 0.0, 1.0);
        Realization o;
        o.A = random_skew(n, rng) - 0.5 * f * f.adjoint();
        o.B = randn(n, m, rng);
        o.C = o.B.adjoint();
        o.D = Mat::Zero(m, m);
        const StateSpaceNode node = node_from_orthonormal(o, random_weight(n, rng));
        certified += check_impedance(node).passive();
    }
    return {certified == 50, std::to_string(certified) + "/50 certified"};
}

// 3. Diagonal transform gives scattering passive nodes.
Outcome criterion3() {
    Rng rng(303);
    const std::vector<cplx> grid = right_half_plane_grid(100);
    int failures = 0;
    double worst_gain = 0.0, worst_uy = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index n = dim(rng, 2, 6), m = dim(rng, 1, 3);
        const StateSpaceNode node = random_passive_node(n, m, rng);
        for (double k : {0.5, 1.0, 3.0}) {
            const StateSpaceNode s = diagonal_transform(node, k);
            if (!check_scattering(s).passive()) ++failures;
            for (const cplx& z : grid) worst_gain = std::max(worst_gain, linalg::norm2(eval_transfer(s, z)));
            for (int r = 0; r < 5; ++r) {
                const Vec up = randn(m, 1, rng);
                const Vec yp = randn(m, 1, rng);
                const auto [us, ys] = scattering_signals(up, yp, k);
                const double lhs = us.squaredNorm() - ys.squaredNorm();
                worst_uy = std::max(worst_uy, std::abs(lhs - 2.0 * up.dot(yp).real()));
            }
        }
    }
    return {failures == 0 && worst_gain <= 1.0 + 1e-9 && worst_uy < 1e-12,
            std::to_string(failures) + " non-scattering, sup|G^s| = " + fmt("%.12g", worst_gain) +
                ", signal identity error " + fmt("%.3g", worst_uy)};
}

// 4. Σ^κ through Σ^s equals direct output feedback -κI.
Outcome criterion4() {
    Rng rng(404);
    double worst_route = 0.0, worst_transfer = 0.0;
    int non_contraction = 0;
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index n = dim(rng, 2, 6), m = dim(rng, 1, 3);
        const AlmostPassive ap = random_almost_passive(n, m, rng);
        const double kappa0 = positive_part(ap.E).kappa0;
        const double kappa = std::isinf(kappa0) ? 1.0 : 0.9 * kappa0;
        const FeedbackSynthesis fs = stabilizing_feedback(ap.node, ap.E, kappa);
        const StateSpaceNode direct = output_feedback(ap.node, -kappa * Mat::Identity(m, m));
        worst_route = std::max(worst_route, max_diff(fs.closed_loop, direct) / (1.0 + max_abs(direct.A())));
        if (!generates_contraction(fs.closed_loop)) ++non_contraction;
        const Mat I = Mat::Identity(m, m);
        for (const cplx& s : right_half_plane_grid(10)) {
            const Mat gk = eval_transfer(fs.closed_loop, s);
            const Mat gs = eval_transfer(fs.scattering_intermediate, s);
            const Mat rhs = (fs.beta / fs.alpha) * I - gs / (fs.alpha * fs.alpha);
            worst_transfer = std::max(worst_transfer, max_abs(gk - rhs));
        }
    }
    return {worst_route < 1e-9 && non_contraction == 0 && worst_transfer < 1e-9,
            "route difference " + fmt("%.3g", worst_route) + ", transfer identity error " +
                fmt("%.3g", worst_transfer) + ", " + std::to_string(non_contraction) + " non-dissipative"};
}

bool shifted_passive(const StateSpaceNode& node, const Mat& E) {
    return check_impedance(shift_feedthrough(node, E)).passive();
}

// 5. Minimal-E formulas.
Outcome criterion5() {
    Rng rng(505);
    const std::vector<cplx> points = {1.0, cplx(2, 1), cplx(0.5, -2), 3.0, cplx(10, 5)};
    double spread1 = 0.0, spread2 = 0.0, bounded = 0.0;
    int probe_failures = 0;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index n = dim(rng, 2, 6), m = dim(rng, 1, 3);
        // ESAD: A + A* = -Q, C = B*; skew A on even instances.
        Realization o;
        const Mat f = randn(n, n, rng);
        o.A = random_skew(n, rng) - (i % 2 == 0 ? Mat(Mat::Zero(n, n)) : Mat(0.5 * f * f.adjoint()));
        o.B = randn(n, m, rng);
        o.C = o.B.adjoint();
        o.D = randn(m, m, rng);
        const StateSpaceNode esad = node_from_orthonormal(o, random_weight(n, rng));
        const Mat e1 = minimal_E_esad(esad, points[0]);
        for (const cplx& s : points) spread1 = std::max(spread1, max_abs(minimal_E_esad(esad, s) - e1));
        if (i % 2 == 0) bounded = std::max(bounded, max_abs(-2.0 * e1 - (o.D + o.D.adjoint())));
        if (!shifted_passive(esad, e1) || shifted_passive(esad, e1 - 1e-3 * Mat::Identity(m, m))) ++probe_failures;

        // Self-adjoint A <= 0, C = B*.
        Realization sa;
        const Mat g = randn(n, n, rng);
        sa.A = -(g * g.adjoint()) - 0.1 * Mat::Identity(n, n);
        sa.B = randn(n, m, rng);
        sa.C = sa.B.adjoint();
        sa.D = randn(m, m, rng);
        const StateSpaceNode sanode = node_from_orthonormal(sa, random_weight(n, rng));
        const Mat e2 = minimal_E_selfadjoint(sanode, points[0]);
        for (const cplx& s : points) {
            if (s.real() > 0.0) spread2 = std::max(spread2, max_abs(minimal_E_selfadjoint(sanode, s) - e2));
        }
        if (!shifted_passive(sanode, e2) || shifted_passive(sanode, e2 - 1e-3 * Mat::Identity(m, m))) ++probe_failures;

        // Second-order plants.
        const Eigen::Index q = dim(rng, 2, 4), m0 = dim(rng, 1, 2), m1 = dim(rng, 1, 2);
        SecondOrderPlant plant;
        const Mat a = randn(q, q, rng, false);
        plant.A0 = a * a.adjoint() + 0.5 * Mat::Identity(q, q);
        const Mat d = randn(q, q, rng, false);
        plant.M = d * d.adjoint() + 0.2 * Mat::Identity(q, q);
        plant.C0 = randn(m0, q, rng, false);
        SecondOrderPlant non = plant;
        non.B0 = randn(q, m0, rng, false);
        const ShiftedNode s7 = build_noncolocated(non);
        if (!shifted_passive(s7.node, s7.E_min) ||
            shifted_passive(s7.node, s7.E_min - 1e-3 * Mat::Identity(m0, m0)))
            ++probe_failures;
        SecondOrderPlant two = plant;
        two.C1 = randn(m1, q, rng, false);
        const ShiftedNode s8 = build_two_channel(two);
        const Eigen::Index mm = m0 + m1;
        if (!shifted_passive(s8.node, s8.E_min) ||
            shifted_passive(s8.node, s8.E_min - 1e-3 * Mat::Identity(mm, mm)))
            ++probe_failures;
    }
    return {spread1 < 1e-8 && spread2 < 1e-8 && bounded < 1e-10 && probe_failures == 0,
            "ESAD spread " + fmt("%.3g", spread1) + ", -2E vs D+D* " + fmt("%.3g", bounded) +
                ", self-adjoint spread " + fmt("%.3g", spread2) + ", " + std::to_string(probe_failures) +
                " minimality probe failures"};
}

// 6. Finite-dimensional stability theorem and dark-mode counterexamples.
Outcome criterion6() {
    Rng rng(606);
    int certified = 0, hurwitz = 0, lossless = 0;
    double worst_abscissa = -1e300;
    while (certified < 50) {
        const Eigen::Index n = dim(rng, 2, 6), m = dim(rng, 1, 3);
        StateSpaceNode node = random_passive_node(n, m, rng);
        Mat E = Mat::Zero(m, m);
        if (certified % 2 == 0) {
            node = random_lossless_node(n, m, rng);
            ++lossless;
        } else {
            const AlmostPassive ap = random_almost_passive(n, m, rng);
            node = ap.node;
            E = ap.E;
        }
        const double kappa0 = positive_part(E).kappa0;
        const double kappa = std::isinf(kappa0) ? 1.0 : 0.9 * kappa0;
        const StabilityReport r = stability_verdict(node, E, kappa);
        if (!(r.cweak_holds || r.bweak_holds)) continue;
        ++certified;
        worst_abscissa = std::max(worst_abscissa, r.closed_loop_abscissa);
        hurwitz += r.closed_loop_abscissa < -1e-10;
    }
    int retained = 0;
    double worst_match = 0.0;
    for (int i = 0; i < 10; ++i) {
        const Eigen::Index nv = dim(rng, 1, 4), m = dim(rng, 1, 2);
        const DarkMode dm = dark_mode_node(nv, m, rng);
        const StabilityReport r = stability_verdict(dm.node, Mat::Zero(m, m), 1.0);
        const FeedbackSynthesis fs = stabilizing_feedback(dm.node, Mat::Zero(m, m), 1.0);
        double best = 1e300;
        for (const cplx& l : linalg::eigenvalues(fs.closed_loop.A())) best = std::min(best, std::abs(l - cplx(0, dm.omega)));
        double open = 1e300;
        for (double w : r.imaginary_spectrum) open = std::min(open, std::abs(w - dm.omega));
        worst_match = std::max({worst_match, best, open});
        retained += r.verdict == StabilityVerdict::NotStable && best < 1e-8 && open < 1e-8 && !r.cweak_holds &&
                    !r.bweak_holds;
    }
    return {hurwitz == 50 && retained == 10,
            std::to_string(hurwitz) + "/50 Hurwitz (" + std::to_string(lossless) +
                " lossless, worst abscissa " + fmt("%.3g", worst_abscissa) + "), " + std::to_string(retained) +
                "/10 dark modes retained (worst match " + fmt("%.3g", worst_match) + ")"};
}

// Independent root oracle: Newton on cos x - 1/cosh x from (k + 1/2)π.
double oracle_beta(int k) {
    double x = (k + 0.5) * std::numbers::pi;
    for (int it = 0; it < 60; ++it) {
        const double g = std::cos(x) - 1.0 / std::cosh(x);
        const double dg = -std::sin(x) + std::tanh(x) / std::cosh(x);
        x -= g / dg;
    }
    return 0.5 * x;
}

// 7. Beam example.
Outcome criterion7() {
    BeamParameters p;
    p.n_modes = 12;
    p.rho_a = 1.0;
    p.EI = 1.0;
    p.EbarI = 0.01;
    const BeamModel beam = beam_model(p);
    const double tol = 1e-9 * (1.0 + linalg::norm2(beam.node.A()));
    int zeros = 0;
    for (const cplx& l : linalg::eigenvalues(beam.node.A())) zeros += std::abs(l) <= tol;

    const StabilityReport r = stability_verdict(beam.node, Mat::Zero(2, 2), 1.0);
    const FeedbackSynthesis fs = stabilizing_feedback(beam.node, Mat::Zero(2, 2), 1.0);

    Rng rng(707);
    Vec z0 = randn(beam.node.n(), 1, rng, false);
    z0 /= std::sqrt(beam.node.energy(z0));
    const Trajectory tr = simulate(fs.closed_loop, z0, [](double) { return Vec(Vec::Zero(2)); }, 50.0, 100000);
    double worst_rise = 0.0;
    double prev = beam.node.energy(tr.states.front());
    for (const Vec& z : tr.states) {
        const double e = beam.node.energy(z);
        worst_rise = std::max(worst_rise, e - prev);
        prev = e;
    }

    double worst_root = 0.0;
    for (std::size_t k = 2; k < beam.modes.size(); ++k) {
        const double b = oracle_beta(static_cast<int>(k) - 1);
        const double lam = beam.plant.A0(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
        worst_root = std::max(worst_root, std::abs(lam - std::pow(b, 4)) / std::pow(b, 4));
    }
    const bool ok = zeros >= 2 && r.closed_loop_abscissa < 0.0 && r.verdict == StabilityVerdict::StronglyStable &&
                    worst_rise <= 1e-6 && worst_root < 1e-8;
    return {ok, "zero eigenvalue multiplicity " + std::to_string(zeros) + ", closed-loop abscissa " +
                    fmt("%.4g", r.closed_loop_abscissa) + ", max energy rise " + fmt("%.3g", worst_rise) +
                    ", modal root error " + fmt("%.3g", worst_root)};
}

// 8. Energy audits and witness inputs.
Outcome criterion8() {
    Rng rng(808);
    double worst = 1e300;
    int failed = 0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index n = dim(rng, 2, 5), m = dim(rng, 1, 2);
        const StateSpaceNode node = i % 4 == 0 ? random_lossless_node(n, m, rng) : random_passive_node(n, m, rng);
        const Vec z0 = randn(n, 1, rng);
        const Trajectory tr = simulate(node, z0, random_smooth_input(m, rng), 5.0, 10000);
        const AuditReport a = energy_audit(tr, node.W());
        worst = std::min(worst, a.min_defect);
        failed += !a.passed || a.min_defect < -1e-6;
    }
    int witnesses = 0, certs = 0;
    double weakest = -1e300;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index n = dim(rng, 2, 5), m = dim(rng, 1, 2);
        const StateSpaceNode node = random_nonpassive_node(n, m, rng, true, i % 3);
        const PassivityCertificate cert = check_impedance(node);
        if (cert.passive()) continue;
        ++certs;
        const WitnessExperiment w = witness_experiment(node, cert);
        weakest = std::max(weakest, w.audit.min_defect);
        witnesses += w.audit.min_defect < -1e-3 && !w.audit.passed;
    }
    for (int i = 0; i < 5; ++i) {
        const Eigen::Index n = dim(rng, 2, 5), m = dim(rng, 1, 2);
        Realization o = random_passive_ortho(n, m, rng);
        o.D += 3.0 * Mat::Identity(m, m);
        const StateSpaceNode node = node_from_orthonormal(o, random_weight(n, rng));
        const PassivityCertificate cert = check_scattering(node);
        if (cert.passive()) continue;
        ++certs;
        const WitnessExperiment w = witness_experiment(node, cert);
        weakest = std::max(weakest, w.audit.min_defect);
        witnesses += w.audit.min_defect < -1e-3 && !w.audit.passed;
    }
    return {failed == 0 && witnesses == certs && certs == 25,
            "passive suite min defect " + fmt("%.3g", worst) + " (" + std::to_string(failed) + " failures), " +
                std::to_string(witnesses) + "/" + std::to_string(certs) + " witnesses fail the audit (weakest " +
                fmt("%.3g", weakest) + ")"};
}

// 9. Cayley round trips and the Laguerre correspondence.
Outcome criterion9() {
    Rng rng(909);
    double worst_trip = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index n = dim(rng, 2, 6), m = dim(rng, 1, 3);
        const StateSpaceNode node = random_passive_node(n, m, rng);
        for (cplx alpha : {cplx(1.0, 0.0), cplx(2.0, 0.5)}) {
            const DiscreteSystem d = internal_cayley(node, alpha);
            const StateSpaceNode back = inverse_cayley(d);
            worst_trip = std::max(worst_trip, max_diff(back, node));
            const DiscreteSystem again = internal_cayley(back, alpha);
            worst_trip = std::max({worst_trip, max_abs(again.Ad() - d.Ad()), max_abs(again.Bd() - d.Bd()),
                                   max_abs(again.Cd() - d.Cd()), max_abs(again.Dd() - d.Dd())});
        }
    }

    constexpr std::size_t K = 64;
    constexpr double T = 250.0;
    constexpr int steps = 50000;
    double worst_coeff = 0.0;
    for (int i = 0; i < 5; ++i) {
        const Eigen::Index n = dim(rng, 2, 4), m = dim(rng, 1, 2);
        Realization o = random_passive_ortho(n, m, rng);
        o.A -= 0.5 * Mat::Identity(n, n);
        const StateSpaceNode node = node_from_orthonormal(o, random_weight(n, rng));
        const Mat amp = randn(m, 2, rng);
        const double g1 = uniform(rng, 0.3, 1.0), g2 = uniform(rng, 0.3, 1.0), w = uniform(rng, 0.5, 2.0);
        const InputSignal u = [=](double t) {
            Vec v = amp.col(0) * (t * std::exp(-g1 * t)) + amp.col(1) * (std::sin(w * t) * std::exp(-g2 * t));
            return v;
        };
        const Trajectory tr = simulate(node, Vec::Zero(n), u, T, steps);
        const std::vector<Vec> uk = laguerre_coefficients(tr.times, tr.inputs, 1.0, K);
        const std::vector<Vec> yk = laguerre_coefficients(tr.times, tr.outputs, 1.0, K);
        const std::vector<Vec> pred = discrete_response(internal_cayley(node, 1.0), uk);
        for (std::size_t k = 0; k < K; ++k) worst_coeff = std::max(worst_coeff, (pred[k] - yk[k]).cwiseAbs().maxCoeff());
    }
    return {worst_trip < 1e-10 && worst_coeff < 1e-6,
            "round-trip error " + fmt("%.3g", worst_trip) + ", Laguerre correspondence error " +
                fmt("%.3g", worst_coeff)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"passivity criterion equivalence", criterion1},
        {"bounded colocated contraction nodes are passive", criterion2},
        {"diagonal transform is scattering passive", criterion3},
        {"stabilizing feedback route equivalence", criterion4},
        {"minimal feedthrough shifts", criterion5},
        {"closed-loop stability and dark modes", criterion6},
        {"free-free beam example", criterion7},
        {"energy audits and witnesses", criterion8},
        {"Cayley round trips and Laguerre correspondence", criterion9},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %zu: %s: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    out.detail.c_str(), secs);
        failures += !out.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
