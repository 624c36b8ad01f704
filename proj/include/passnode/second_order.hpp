#pragma once

#include <optional>
#include <vector>

#include "passnode/node.hpp"

namespace passnode {

/// q'' + M q' + A0 q = (input map) u with rate output C0 q' (plus C1 q for
/// the two-channel class). States are (q, q') with energy weight diag(A0, I).
struct SecondOrderPlant {
    Mat A0;
    Mat M;
    Mat C0;
    std::optional<Mat> B0;
    std::optional<Mat> C1;
};

/// Checks dimensions, A0 = A0^H > 0 and M = M^H >= 0.
void validate_plant(const SecondOrderPlant& plant);

/// A = [0 I; -A0 -M], B = [0; C0^H], C = [0 C0], D = 0, W = diag(A0, I).
StateSpaceNode build_colocated(const SecondOrderPlant& plant);

struct ShiftedNode {
    StateSpaceNode node;
    Mat E_min;
};

/// B = [0; B0] with E_min = 1/4 (C0 - B0^H) M^{-1} (C0^H - B0).
ShiftedNode build_noncolocated(const SecondOrderPlant& plant);

/// Inputs (u0, u1), outputs (y0, y1) with w = q' - A0^{-1} C1^H u1 as the
/// velocity state:
/// B = [0, A0^{-1}C1^H; C0^H, 0], C = [0, C0; C1, 2 C2], D = [0, D0; 0, D2],
/// C2 = C1 A0^{-1} M, D0 = C0 A0^{-1} C1^H, D1 = C1 A0^{-1} C0^H,
/// D2 = C2 A0^{-1} C1^H and E_min = -1/2 [0, D1^H; D1, 0].
ShiftedNode build_two_channel(const SecondOrderPlant& plant);

struct BeamParameters {
    double rho_a = 1.0;
    double EI = 1.0;
    double EbarI = 0.01;
    int n_modes = 12;  // includes the two rigid-body modes
};

enum class ModeFamily { Translation, Rotation, Symmetric, Antisymmetric };

/// Eigenfunction of the free-free beam on (-1, 1), mass normalized
/// (rho_a ∫ φ^2 = 1).
struct BeamMode {
    ModeFamily family = ModeFamily::Translation;
    double beta = 0.0;    // φ'''' = β^4 φ
    double lambda = 0.0;  // β^4
    double scale = 1.0;   // multiplies the unnormalized shape
    double value(double x) const;
    double slope(double x) const;
};

/// Positive roots of cos(2β) cosh(2β) = 1 in increasing order, by bisection.
std::vector<double> free_free_betas(int count);

/// Two rigid modes followed by n_modes - 2 flexible ones.
std::vector<BeamMode> free_free_modes(int n_modes, double rho_a);

struct BeamModel {
    StateSpaceNode node;
    SecondOrderPlant plant;  // full modal plant, rigid modes included
    std::vector<BeamMode> modes;
};

/// Modal Kelvin-Voigt beam with force and moment inputs at x = 0 and
/// colocated velocity / angular velocity outputs. The rigid-body positions
/// carry no energy and are left out of the state, which is
/// (flexible positions, all modal velocities) with W = diag(A0_flex, I).
BeamModel beam_model(const BeamParameters& params);

std::string_view to_string(ModeFamily family);

}  // namespace passnode
