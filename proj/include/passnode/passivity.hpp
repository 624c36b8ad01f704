#pragma once

#include <optional>
#include <span>
#include <vector>

#include "passnode/node.hpp"

namespace passnode {

enum class PassivityKind { Scattering, Impedance };
enum class Verdict { Passive, NotPassive };

/// Outcome of one quadratic-form test.
struct FormCheck {
    std::optional<cplx> s;  // test point; empty for the s-free bounded-triple form
    double min_eigenvalue = 0.0;
    bool passive = false;
};

/// Verdict of a passivity test plus its numerical witness.
///
/// `min_eigenvalue` and `witness` come from the primary form (the bounded-triple
/// block for continuous nodes, the discrete block for Cayley-transformed
/// systems, the reciprocal block for the reciprocal test). Witness vectors are
/// in orthonormal state coordinates stacked over the input: [x; u].
struct PassivityCertificate {
    PassivityKind kind = PassivityKind::Impedance;
    Verdict verdict = Verdict::NotPassive;
    std::vector<cplx> test_points;
    double min_eigenvalue = 0.0;
    std::optional<Vec> witness;
    std::vector<FormCheck> checks;

    bool passive() const { return verdict == Verdict::Passive; }
    /// Every evaluated form reached the same verdict ("for some, hence every, s").
    bool consistent() const;
};

/// {1, 2+i, 2-i, 10} ∩ ρ(A).
std::vector<cplx> default_test_points(const StateSpaceNode& node);

/// Bounded-triple impedance form [[-A-A*, C*-B], [C-B*, D+D*]] in orthonormal coordinates.
Mat impedance_block_form(const Realization& o);
/// Bounded-triple scattering form [[-A-A*-C*C, -B-C*D], [-B*-D*C, I-D*D]].
Mat scattering_block_form(const Realization& o);
/// Resolvent forms at a point s ∈ ρ(A): right-hand side minus left-hand side of
/// the impedance (b) or scattering (a) inequality.
Mat impedance_resolvent_form(const Realization& o, cplx s);
Mat scattering_resolvent_form(const Realization& o, cplx s);

/// Impedance passivity certificate. The bounded-triple form decides the
/// verdict; the resolvent form is also evaluated at every test point (defaults
/// plus `extra_points`) and recorded in `checks`.
PassivityCertificate check_impedance(const StateSpaceNode& node,
                                     std::span<const cplx> extra_points = {});

PassivityCertificate check_scattering(const StateSpaceNode& node,
                                      std::span<const cplx> extra_points = {});

/// Reciprocal-system test of Σ_E at iω:
/// [[-A_ω^{-1}-A_ω^{-*}, A_ω^{-1}B + A_ω^{-*}C*], [.., 2E + G(iω) + G(iω)*]] >= 0,
/// A_ω = A - iωI.
PassivityCertificate check_impedance_reciprocal(const StateSpaceNode& node, const Mat& E, double omega);

/// Residual of B*(iωI + A*)^{-1} = C(iωI - A)^{-1}.
double colocation_residual(const StateSpaceNode& node, double omega);

/// E = -1/2 [G(iω) + G(iω)*] for contraction generators satisfying the
/// colocation identity above at ω.
Mat minimal_E_colocated_at(const StateSpaceNode& node, double omega);

/// E = -1/2 [G(s)+G(s)*] + 1/2 B*(conj(s) I - A*)^{-1} [2 Re(s) I + Q] (sI - A)^{-1} B
/// with Q = -(A + A*) >= 0 and C = B*.
Mat minimal_E_esad(const StateSpaceNode& node, cplx s = 1.0);

/// E = -1/2 [G(s)+G(s)*] + B*(conj(s) I - A)^{-1} [Re(s) I - A] (sI - A)^{-1} B
/// for self-adjoint A <= 0 and C = B*, s in the open right half-plane.
Mat minimal_E_selfadjoint(const StateSpaceNode& node, cplx s = 1.0);

struct PositivePart {
    Mat E_plus;
    double c = 0.0;       // ||E^+||
    double kappa0 = 0.0;  // 1/c, +inf when c == 0
};

PositivePart positive_part(const Mat& E);

struct PositiveRealScan {
    double min_eigenvalue = 0.0;
    cplx argmin{};
    std::size_t points = 0;
};

/// min over the grid of λ_min(G(s) + G(s)^H). A necessary condition for
/// impedance passivity only.
PositiveRealScan positive_real_scan(const StateSpaceNode& node, std::span<const cplx> grid);

/// `count` points in the open right half-plane: log-spaced real parts in
/// [1e-2, 1e2] crossed with imaginary parts in [-1e2, 1e2].
std::vector<cplx> right_half_plane_grid(std::size_t count);

std::string_view to_string(PassivityKind kind);
std::string_view to_string(Verdict verdict);

}  // namespace passnode
