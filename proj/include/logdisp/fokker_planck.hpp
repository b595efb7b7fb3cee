#ifndef LOGDISP_FOKKER_PLANCK_HPP
#define LOGDISP_FOKKER_PLANCK_HPP

#include <functional>
#include <vector>

#include "logdisp/grid.hpp"

namespace logdisp {

// Harmonic Fokker-Planck operator L = Laplacian + div(2y .), stationary state
// gamma^2 / sqrt(pi), explicit Gaussian kernel.

/// K(t,x,y) = pi^{-1/2} (1-e^{-4t})^{-1/2} exp(-(x - e^{-2t} y)^2 / (1-e^{-4t})).
double fp_kernel(double t, double x, double y);

/// Dense kernel matrix on a grid; K > 0, columns integrate to 1.
struct FPKernelEval {
  double t;
  Grid1D grid;
  std::vector<double> k;  // row-major: k[i*n + j] = K(t, x_i, y_j)

  static FPKernelEval assemble(double t, const Grid1D& g);
  /// Max deviation of any column quadrature from 1.
  double column_mass_defect() const;
};

/// e^{tL} f0 by dense kernel quadrature; preserves mass and nonnegativity.
rvec fp_apply(double t, const rvec& f0, const Grid1D& g);
rvec fp_apply(const FPKernelEval& kernel, const rvec& f0);

/// Independent route through the heat equation: compares fp_apply against
/// e^{2t} H((e^{4t}-1)/2, e^{2t} x), heat solve by Fourier multiplier
/// e^{-s k^2/2} on the dilated grid. Returns max deviation relative to the
/// peak of the kernel route.
double fp_from_heat_check(const rvec& f0, double t, const Grid1D& g);

/// Time-sampled source for Duhamel integrals: h(u_k, y_j) on a uniform u-lattice.
struct TimeSampledSource {
  std::vector<double> u;           // times, uniform, u.front() = 0
  std::vector<rvec> values;        // one grid function per time
};

TimeSampledSource sample_source(const std::function<double(double, double)>& h, double t,
                                int n_time, const Grid1D& g);

/// f(t) = d^n/dx^n int_0^t e^{-2n(t-u)} e^{(t-u)L} h(u) du  (commuted form of the
/// Duhamel solution of f_t = L f + d^n h). Composite-trapezoid time quadrature
/// with a Richardson consistency check; spectral differentiation at the end.
rvec fp_duhamel(const TimeSampledSource& h, int n, double t, const Grid1D& g,
                double* richardson_defect = nullptr);

/// Solution of f_t = L f + d/dt (d^n h), f(0) = 0, by the reduction through the
/// plain-source solution g: f = L g + d^n h(t) - e^{-2nt} d^n (e^{tL} h(0)).
rvec fp_duhamel_time_derivative(const TimeSampledSource& h, int n, double t, const Grid1D& g);

/// One row of the decay certificate at time t.
struct FPDecayRow {
  double t = 0.0;
  int n = 0;
  double lhs_wn = 0.0;       // ||f(t)||_{W^{-n,1}}
  double rhs_wn = 0.0;       // e^{-2nt} int_0^t e^{2nu} |h|(u) du
  double lhs_wn1 = 0.0;      // ||f(t)||_{W^{-n+1,1}}
  double rhs_wn1 = 0.0;      // singular-prefactor bound, first form
  double rhs_wn1_sup = 0.0;  // second form with the sup-in-time factor
  bool pass = false;         // both bounds hold with 5% headroom
};

/// Evaluates both decay estimates for the Duhamel solution with source d^n h.
/// h must have zero mean (and zero first moment when n = 2) so the iterated
/// primitives define the negative norms.
std::vector<FPDecayRow> fp_decay_certificate(const TimeSampledSource& h, int n,
                                             const std::vector<double>& t_values,
                                             const Grid1D& g);

struct W2ContractionRow {
  double t = 0.0;
  double w2 = 0.0;        // W2(e^{tL} f0, stationary)
  double w2_bound = 0.0;  // e^{-2t} W2(f0, stationary)
  bool pass = false;      // w2 <= bound * (1 + 1e-6)
};

std::vector<W2ContractionRow> w2_contraction_check(const Density& f0,
                                                   const std::vector<double>& t_values);

}  // namespace logdisp

#endif
