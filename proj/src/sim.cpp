#include "passnode/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "passnode/linalg.hpp"

namespace passnode {

Trajectory simulate(const StateSpaceNode& node, const Vec& z0, const InputSignal& u, double T, int steps) {
    if (steps < 2) throw Error(ErrorCode::InvalidArgument, "steps must be at least 2");
    if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
    if (z0.size() != node.n()) throw Error(ErrorCode::DimensionMismatch, "z0 must have n entries");
    const Mat& A = node.A();
    const Mat& B = node.B();
    const double h = T / steps;
    auto input = [&](double t) {
        Vec v = u(t);
        if (v.size() != node.m()) throw Error(ErrorCode::DimensionMismatch, "input has wrong length");
        return v;
    };

    Trajectory tr;
    const auto count = static_cast<std::size_t>(steps) + 1;
    tr.times.reserve(count);
    tr.states.reserve(count);
    tr.inputs.reserve(count);
    tr.outputs.reserve(count);

    Vec z = z0;
    Vec u0 = input(0.0);
    for (int j = 0; j <= steps; ++j) {
        const double t = j * h;
        tr.times.push_back(t);
        tr.states.push_back(z);
        tr.inputs.push_back(u0);
        tr.outputs.push_back(node.C() * z + node.D() * u0);
        if (j == steps) break;
        const Vec um = input(t + 0.5 * h);
        const Vec u1 = input(t + h);
        const Vec k1 = A * z + B * u0;
        const Vec k2 = A * (z + 0.5 * h * k1) + B * um;
        const Vec k3 = A * (z + 0.5 * h * k2) + B * um;
        const Vec k4 = A * (z + h * k3) + B * u1;
        z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!z.allFinite()) throw Error(ErrorCode::NonFiniteState, "state became non-finite");
        u0 = u1;
    }
    return tr;
}

SampledSignal::SampledSignal(double t0, double dt, std::vector<Vec> samples)
    : t0_(t0), dt_(dt), values_(std::move(samples)) {
    if (values_.size() < 2 || !(dt_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "need two samples and dt > 0");
    const std::size_t n = values_.size();
    const Eigen::Index m = values_.front().size();
    for (const Vec& v : values_) {
        if (v.size() != m) throw Error(ErrorCode::DimensionMismatch, "ragged samples");
    }
    // Tridiagonal system for a uniform natural spline, Thomas algorithm.
    second_.assign(n, Vec::Zero(m));
    std::vector<double> c(n, 0.0);
    std::vector<Vec> d(n, Vec::Zero(m));
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec rhs = 6.0 * (values_[i + 1] - 2.0 * values_[i] + values_[i - 1]) / (dt_ * dt_);
        const double denom = 4.0 - c[i - 1];
        c[i] = 1.0 / denom;
        d[i] = (rhs - d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        second_[i] = d[i] - c[i] * second_[i + 1];
        if (i == 1) break;
    }
}

Vec SampledSignal::operator()(double t) const {
    const std::size_t last = values_.size() - 1;
    double x = (t - t0_) / dt_;
    x = std::clamp(x, 0.0, static_cast<double>(last));
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i >= last) i = last - 1;
    const double a = static_cast<double>(i + 1) - x;
    const double b = x - static_cast<double>(i);
    const double h2 = dt_ * dt_ / 6.0;
    return a * values_[i] + b * values_[i + 1] +
           h2 * ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]);
}

AuditReport energy_audit(const Trajectory& traj, const Mat& W, const std::optional<Mat>& E, PassivityKind kind) {
    const std::size_t n = traj.times.size();
    if (traj.states.size() != n || traj.inputs.size() != n || traj.outputs.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "trajectory lengths differ");
    }
    AuditReport rep;
    rep.kind = kind;
    if (n == 0) return rep;
    const Eigen::Index m = traj.inputs.front().size();
    if (E && (E->rows() != m || E->cols() != m)) throw Error(ErrorCode::DimensionMismatch, "E must be m x m");

    auto energy = [&](const Vec& z) { return (z.adjoint() * W * z)(0, 0).real(); };
    auto rate = [&](std::size_t j) {
        const Vec& u = traj.inputs[j];
        const Vec& y = traj.outputs[j];
        double r;
        if (kind == PassivityKind::Impedance) {
            r = 2.0 * u.dot(y).real();
            if (E) r += 2.0 * u.dot(*E * u).real();
        } else {
            r = u.squaredNorm() - y.squaredNorm();
        }
        return r;
    };
    auto magnitude = [&](std::size_t j) { return traj.inputs[j].squaredNorm() + traj.outputs[j].squaredNorm(); };

    const double e0 = energy(traj.states.front());
    double integral = 0.0;
    double mag_integral = 0.0;
    double peak = e0;
    rep.defect.assign(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        const double h = traj.times[j] - traj.times[j - 1];
        integral += 0.5 * h * (rate(j - 1) + rate(j));
        mag_integral += 0.5 * h * (magnitude(j - 1) + magnitude(j));
        const double ej = energy(traj.states[j]);
        peak = std::max(peak, ej);
        rep.defect[j] = integral - (ej - e0);
    }
    rep.min_defect = *std::min_element(rep.defect.begin(), rep.defect.end());
    rep.energy_scale = std::max(1.0, peak + mag_integral);
    rep.tolerance = tolerances().audit * rep.energy_scale;
    rep.passed = rep.min_defect >= -rep.tolerance;
    return rep;
}

WitnessExperiment witness_experiment(const StateSpaceNode& node, const PassivityCertificate& cert,
                                     const std::optional<Mat>& E) {
    if (cert.passive() || !cert.witness) {
        throw Error(ErrorCode::InvalidArgument, "certificate carries no violation witness");
    }
    const Vec& w = *cert.witness;
    if (w.size() != node.n() + node.m()) throw Error(ErrorCode::DimensionMismatch, "witness has wrong length");
    const StateSpaceNode sys = E ? shift_feedthrough(node, *E) : node;
    const Vec z_unit = node.from_orthonormal(w.head(node.n()));
    const Vec u_unit = w.tail(node.m());

    // The defect starts out with slope equal to the violated quadratic form,
    // so a short horizon isolates it from the higher order terms.
    const double speed = 1.0 + linalg::norm2(node.orthonormal().A) + linalg::norm2(node.orthonormal().B) +
                         linalg::norm2(node.orthonormal().C) + linalg::norm2(sys.D());
    constexpr int steps = 200;
    WitnessExperiment best;
    double best_ratio = 0.0;
    for (double f : {1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001}) {
        const double horizon = f / speed;
        const Vec u = u_unit;
        Trajectory tr = simulate(sys, z_unit, [u](double) { return u; }, horizon, steps);
        AuditReport a = energy_audit(tr, node.W(), std::nullopt, cert.kind);
        const double ratio = a.min_defect / a.energy_scale;
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best = {z_unit, u_unit, horizon, std::move(tr), std::move(a)};
        }
    }
    if (best.horizon == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "witness produced no negative defect");
    }
    // The defect is a quadratic form in (z0, u): rescale to a defect near -0.1.
    const double r = std::sqrt(0.1 / -best.audit.min_defect);
    best.z0 *= r;
    best.u *= r;
    const Vec u = best.u;
    best.trajectory = simulate(sys, best.z0, [u](double) { return u; }, best.horizon, steps);
    best.audit = energy_audit(best.trajectory, node.W(), std::nullopt, cert.kind);
    return best;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const AuditReport* audit) {
    bool complex_values = false;
    auto scan = [&](const std::vector<Vec>& vs) {
        for (const Vec& v : vs) {
            if (v.size() > 0 && v.imag().cwiseAbs().maxCoeff() != 0.0) complex_values = true;
        }
    };
    scan(traj.states);
    scan(traj.inputs);
    scan(traj.outputs);

    auto header = [&](const char* prefix, Eigen::Index count) {
        for (Eigen::Index i = 0; i < count; ++i) {
            if (complex_values) {
                os << ',' << prefix << i << "_re," << prefix << i << "_im";
            } else {
                os << ',' << prefix << i;
            }
        }
    };
    auto row = [&](const Vec& v) {
        char buf[64];
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", v(i).real());
            os << buf;
            if (complex_values) {
                std::snprintf(buf, sizeof buf, ",%.17g", v(i).imag());
                os << buf;
            }
        }
    };
    if (traj.times.empty()) {
        os << "t\n";
        return;
    }
    os << 't';
    header("z", traj.states.front().size());
    header("u", traj.inputs.front().size());
    header("y", traj.outputs.front().size());
    if (audit) os << ",defect";
    os << '\n';
    char buf[64];
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[j]);
        os << buf;
        row(traj.states[j]);
        row(traj.inputs[j]);
        row(traj.outputs[j]);
        if (audit) {
            std::snprintf(buf, sizeof buf, ",%.17g", audit->defect[j]);
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace passnode
