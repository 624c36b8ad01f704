#pragma once

#include <span>
#include <vector>

#include "passnode/node.hpp"
#include "passnode/passivity.hpp"

namespace passnode {

/// Discrete-time system z_{k+1} = Ad z_k + Bd u_k, y_k = Cd z_k + Dd u_k
/// obtained from a continuous node by the internal Cayley transform with
/// parameter alpha (Re alpha > 0). The state weight W of the originating
/// node is carried along unchanged.
class DiscreteSystem {
   public:
    DiscreteSystem(Mat Ad, Mat Bd, Mat Cd, Mat Dd, cplx alpha, std::optional<Mat> W = std::nullopt);

    const Mat& Ad() const { return Ad_; }
    const Mat& Bd() const { return Bd_; }
    const Mat& Cd() const { return Cd_; }
    const Mat& Dd() const { return Dd_; }
    const Mat& W() const { return W_; }
    cplx alpha() const { return alpha_; }

    Eigen::Index n() const { return Ad_.rows(); }
    Eigen::Index m() const { return Bd_.cols(); }
    Eigen::Index p() const { return Cd_.rows(); }

    /// Operators in W-orthonormal coordinates.
    Realization orthonormal() const;

   private:
    Mat Ad_, Bd_, Cd_, Dd_, W_;
    cplx alpha_;
};

/// Ad = (conj(α)I + A)(αI - A)^{-1}, Bd = sqrt(2 Re α)(αI - A)^{-1}B,
/// Cd = sqrt(2 Re α) C(αI - A)^{-1}, Dd = G(α).
DiscreteSystem internal_cayley(const StateSpaceNode& node, cplx alpha = 1.0);

/// Inverse transform; fails with MinusOneEigenvalue when -1 ∈ σ(Ad).
StateSpaceNode inverse_cayley(const DiscreteSystem& disc);

/// G_d(z) = Cd (zI - Ad)^{-1} Bd + Dd.
Mat discrete_transfer(const DiscreteSystem& disc, cplx z);

/// Scattering: [[Ad, Bd], [Cd, Dd]] is a contraction. Impedance:
/// [[Ad*Ad, Ad*Bd], [Bd*Ad, Bd*Bd]] <= [[I, Cd*], [Cd, Dd + Dd*]].
PassivityCertificate check_discrete_passivity(const DiscreteSystem& disc, PassivityKind kind);

/// Output sequence of the discrete system for zero initial state.
std::vector<Vec> discrete_response(const DiscreteSystem& disc, std::span<const Vec> inputs);

/// Time-domain Laguerre function f_k(t) = (-1)^k sqrt(2 Re α) e^{-conj(α) t} L_k(2 Re(α) t),
/// the inverse Laplace transform of φ_k(s) = sqrt(2 Re α)/(conj(α)+s) ((α-s)/(conj(α)+s))^k.
/// Returns f_0..f_{K-1} at time t.
std::vector<cplx> laguerre_functions(double t, cplx alpha, std::size_t K);

/// Coefficients u_k = <u, f_k>_{L2(0,T)} of a signal sampled on a uniform grid
/// (zero beyond the last sample), integrated with composite Simpson weights.
std::vector<Vec> laguerre_coefficients(std::span<const double> times, std::span<const Vec> samples,
                                       cplx alpha, std::size_t K);

/// Quadrature weights on a uniform grid: composite Simpson, closed by a 3/8
/// panel when the interval count is odd.
std::vector<double> uniform_quadrature_weights(std::span<const double> times);

}  // namespace passnode
