#pragma once

#include <utility>

#include "passnode/node.hpp"
#include "passnode/passivity.hpp"

namespace passnode {

/// Outcome of the κ-parameterized stabilizing feedback u = -κy + v.
///
/// `scattering_intermediate` is Σ^s, the diagonal transform of Σ_{cI} with
/// gain k = κ/(1-κc); `closed_loop` is Σ^κ rebuilt from it.
struct FeedbackSynthesis {
    Mat E;
    double c = 0.0;
    double kappa0 = 0.0;  // +inf when E <= 0
    double kappa = 0.0;
    double k = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    StateSpaceNode closed_loop;
    StateSpaceNode scattering_intermediate;
};

/// Σ^s from an impedance passive Σ^p:
/// A^s = A - kB(I+kD)^{-1}C, B^s = sqrt(2k) B(I+kD)^{-1},
/// C^s = -sqrt(2k)(I+kD)^{-1}C, D^s = (I+kD)^{-1}(I-kD).
StateSpaceNode diagonal_transform(const StateSpaceNode& node, double k);

/// Same formulas without the passivity gate.
StateSpaceNode diagonal_transform_unchecked(const StateSpaceNode& node, double k);

/// Signals of Σ^s from those of Σ^p: u^s = sqrt(k/2)(u^p/k + y^p), y^s = sqrt(k/2)(u^p/k - y^p).
std::pair<Vec, Vec> scattering_signals(const Vec& up, const Vec& yp, double k);

/// Closed loop under u = Ky + v:
/// A^K = A + BK(I-DK)^{-1}C, B^K = B(I-KD)^{-1}, C^K = (I-DK)^{-1}C, D^K = D(I-KD)^{-1}.
StateSpaceNode output_feedback(const StateSpaceNode& node, const Mat& K);

/// Σ^κ through Σ^s. Requires Σ_E impedance passive and 0 < κ < κ₀.
FeedbackSynthesis stabilizing_feedback(const StateSpaceNode& node, const Mat& E, double kappa);

}  // namespace passnode
