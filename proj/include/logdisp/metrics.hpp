#ifndef LOGDISP_METRICS_HPP
#define LOGDISP_METRICS_HPP

#include <utility>

#include "logdisp/grid.hpp"

namespace logdisp {

/// Exact 1D p-Wasserstein distance between probability densities.
/// p = 1 uses the CDF formula int |F1 - F2| dx; p > 1 uses quantile quadrature
/// with monotone cubic inversion of the CDFs. Masses must be within 1e-8 of 1
/// (renormalized internally).
double wasserstein_1d(double p, const Density& rho1, const Density& rho2);

/// (relative entropy against gamma^2, Csiszar-Kullback lower bound
///  ||rho - gamma^2||_L1^2 / (2 ||gamma^2||_L1)). Masses must match within 1e-6.
std::pair<double, double> csiszar_kullback_gap(const Density& rho);

/// 1D homogeneous W^{-1,1} norm of zero-mean data: L1 norm of the primitive.
/// Coincides with W1 for differences of probability densities.
double neg_sobolev_w11(const rvec& f, const Grid1D& g);

/// Twice-iterated primitive L1 norm (1D W^{-2,1} surrogate); requires zero mean
/// and a decaying first primitive.
double neg_sobolev_w21(const rvec& f, const Grid1D& g);

/// Interpolation bound C0(delta) ||f||_{W^{-1,1}}^{1-delta} ||f||_{L1}^delta with
/// C0 from the Gaussian-mollifier construction (eta-optimization).
double interp_norm_bound(const rvec& f, const Grid1D& g, double delta);

/// The fitted constant C0(delta) alone.
double interp_norm_constant(double delta);

}  // namespace logdisp

#endif
