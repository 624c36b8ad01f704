#pragma once

#include <optional>
#include <string>

#include "passnode/types.hpp"

namespace passnode {

/// Plain (A, B, C, D) quadruple without any inner-product information.
struct Realization {
    Mat A, B, C, D;
};

/// Finite-dimensional realization of a system node.
///
/// The transfer function is G(s) = C (sI - A)^{-1} B + D. The state space
/// carries the inner product <x, y>_X = y^H W x; all adjoints (A*, B*, C*)
/// are taken with respect to it, e.g. A* = W^{-1} A^H W.
///
/// At construction W = L L^H is factored once and an orthonormal-coordinate
/// copy (L^H A L^{-H}, L^H B, C L^{-H}, D) is stored; every PSD or adjoint
/// test downstream runs on that copy. In finite dimensions the rigged spaces
/// X_1 and X_{-1} coincide with X and every (z0, u) pair is a compatible
/// initial condition, so no domain bookkeeping is needed.
///
/// Instances are immutable and safe to share between threads.
class StateSpaceNode {
   public:
    StateSpaceNode(Mat A, Mat B, Mat C, Mat D, std::optional<Mat> W = std::nullopt,
                   std::string meta = {});

    const Mat& A() const { return A_; }
    const Mat& B() const { return B_; }
    const Mat& C() const { return C_; }
    const Mat& D() const { return D_; }
    const Mat& W() const { return W_; }
    const std::string& meta() const { return meta_; }
    bool has_identity_weight() const { return identity_weight_; }

    Eigen::Index n() const { return A_.rows(); }
    Eigen::Index m() const { return B_.cols(); }
    Eigen::Index p() const { return C_.rows(); }
    bool square() const { return m() == p(); }

    /// Realization in W-orthonormal coordinates.
    const Realization& orthonormal() const { return ortho_; }

    /// x -> L^H x (orthonormal coordinates) and back.
    Vec to_orthonormal(const Vec& x) const;
    Vec from_orthonormal(const Vec& x) const;
    /// Maps an operator given in orthonormal coordinates back, X -> L^{-H} X L^H.
    Mat state_operator_from_orthonormal(const Mat& x) const;

    /// ||x||_W^2 = x^H W x.
    double energy(const Vec& x) const;

    /// W-adjoint of the state operator, W^{-1} A^H W.
    Mat A_adjoint() const;

    StateSpaceNode with_meta(std::string meta) const;

   private:
    Mat A_, B_, C_, D_, W_;
    Mat L_;  // W = L L^H, lower triangular
    Realization ortho_;
    std::string meta_;
    bool identity_weight_ = true;
};

/// Builds a node from orthonormal-coordinate operators and a weight W, i.e. the
/// inverse of StateSpaceNode::orthonormal().
StateSpaceNode node_from_orthonormal(const Realization& ortho, const Mat& W, std::string meta = {});

/// G(s) = C (sI - A)^{-1} B + D.
Mat eval_transfer(const StateSpaceNode& node, cplx s);

/// Dual node (A*, C*, B*, D^H) with W-adjoints; G^d(s) = G(conj(s))^H.
StateSpaceNode dual_node(const StateSpaceNode& node);

/// Σ_E: same generating triple, feedthrough D + E.
StateSpaceNode shift_feedthrough(const StateSpaceNode& node, const Mat& E);

/// β = 1 + max(0, spectral abscissa of A).
double default_beta(const StateSpaceNode& node);

/// Combined observation/feedthrough operator
/// C&D [x; v] = C [x - (βI - A)^{-1} B v] + G(β) v.
/// When β is not supplied the default is used and retried at β + 1 on a
/// singular resolvent.
Vec apply_combined_observation(const StateSpaceNode& node, const Vec& x, const Vec& v,
                               std::optional<double> beta = std::nullopt);

/// Whether W A + A* W <= 0 (A generates a contraction semigroup on X).
bool generates_contraction(const StateSpaceNode& node);

/// Largest eigenvalue of the Hermitian matrix Ã + Ã^H in orthonormal coordinates.
double dissipation_defect(const StateSpaceNode& node);

}  // namespace passnode
