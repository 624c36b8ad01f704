#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "passnode/node.hpp"
#include "passnode/passivity.hpp"

namespace passnode {

using InputSignal = std::function<Vec(double)>;

/// Samples on the uniform grid t_j = j T / steps, j = 0..steps.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<Vec> inputs;
    std::vector<Vec> outputs;
};

/// Classical RK4 for z' = Az + Bu with y = Cz + Du on the grid.
/// Throws NonFiniteState on blow-up.
Trajectory simulate(const StateSpaceNode& node, const Vec& z0, const InputSignal& u, double T, int steps);

/// Natural cubic spline through uniformly sampled vectors.
class SampledSignal {
   public:
    SampledSignal(double t0, double dt, std::vector<Vec> samples);
    Vec operator()(double t) const;

   private:
    double t0_, dt_;
    std::vector<Vec> values_;
    std::vector<Vec> second_;  // spline second derivatives
};

struct AuditReport {
    PassivityKind kind = PassivityKind::Impedance;
    std::vector<double> defect;  // per grid time
    double min_defect = 0.0;
    double energy_scale = 0.0;
    double tolerance = 0.0;
    bool passed = true;
};

/// Impedance: defect(τ) = 2∫Re<u,y> + 2∫<Eu,u> - (||z(τ)||²_W - ||z0||²_W).
/// Scattering: defect(τ) = ∫||u||² - ∫||y||² - (||z(τ)||²_W - ||z0||²_W).
/// Trapezoid quadrature; passes when min defect >= -1e-6 * energy scale.
AuditReport energy_audit(const Trajectory& traj, const Mat& W, const std::optional<Mat>& E = std::nullopt,
                         PassivityKind kind = PassivityKind::Impedance);

struct WitnessExperiment {
    Vec z0;
    Vec u;  // held constant
    double horizon = 0.0;
    Trajectory trajectory;
    AuditReport audit;
};

/// Turns a NotPassive certificate of `node` (or of Σ_E when E is given) into
/// an initial state and constant input whose audit fails. The pair is scaled
/// so the most negative defect is about -0.1.
WitnessExperiment witness_experiment(const StateSpaceNode& node, const PassivityCertificate& cert,
                                     const std::optional<Mat>& E = std::nullopt);

/// CSV with t, state, input, output components and the running defect when given.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const AuditReport* audit = nullptr);

}  // namespace passnode
