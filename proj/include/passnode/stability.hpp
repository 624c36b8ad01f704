#pragma once

#include <vector>

#include "passnode/feedback.hpp"
#include "passnode/node.hpp"

namespace passnode {

enum class StabilityVerdict { WeaklyStable, StronglyStable, Inconclusive, NotStable };

/// Bases are W-orthonormal, expressed in the node's own coordinates.
struct StabilityReport {
    Mat unobservable_basis;
    Mat uncontrollable_dual_basis;
    Mat unitary_basis;
    std::vector<double> imaginary_spectrum;  // ω with iω ∈ σ(A)
    bool cweak_holds = false;
    bool bweak_holds = false;
    StabilityVerdict verdict = StabilityVerdict::Inconclusive;
    std::vector<double> closed_loop_imaginary_spectrum;
    double closed_loop_abscissa = 0.0;
    double kappa = 0.0;
};

struct BenchimolConditions {
    bool cweak = false;
    bool bweak = false;
};

/// Largest A-invariant subspace of ker C.
Mat unobservable_space(const StateSpaceNode& node);

/// Largest A*-invariant subspace of ker B* (the unobservable space of the dual).
Mat uncontrollable_dual_space(const StateSpaceNode& node);

/// Largest subspace of ker(WA + A*W) invariant under A and A*.
Mat unitary_subspace(const StateSpaceNode& node);

/// cweak: 𝒩 ∩ X^u = {0}; bweak: 𝒩^d ∩ X^u = {0}.
BenchimolConditions benchimol_conditions(const StateSpaceNode& node);

/// Invertibility of I - K G(λ) for each λ ∈ ρ(A).
std::vector<bool> closed_loop_spectrum_gate(const StateSpaceNode& node, const Mat& K,
                                            const std::vector<cplx>& lambdas);

/// Imaginary parts of the eigenvalues with |Re λ| <= 1e-9 (1 + ||A||).
std::vector<double> imaginary_axis_eigenvalues(const Mat& A);

StabilityReport stability_verdict(const StateSpaceNode& node, const Mat& E, double kappa);

std::string_view to_string(StabilityVerdict verdict);

}  // namespace passnode
