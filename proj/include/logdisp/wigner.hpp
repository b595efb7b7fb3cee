#ifndef LOGDISP_WIGNER_HPP
#define LOGDISP_WIGNER_HPP

#include <functional>
#include <vector>

#include "logdisp/lognls.hpp"

namespace logdisp {

enum class PhaseSpaceFlavor { wigner, husimi };

/// Real function on the (x, xi) tensor lattice. The xi lattice is the FFT
/// conjugate of the z lattice (spacing pi/L, N points), so the discrete
/// xi-marginal identity sum_m W dxi = |f(x)|^2 is exact.
struct PhaseSpaceField {
  Grid1D grid;           // spatial grid, also the z lattice
  double eps = 1.0;
  PhaseSpaceFlavor flavor = PhaseSpaceFlavor::wigner;
  std::vector<double> w;  // row-major: w[i*n + m] = W(x_i, xi_m)
  double imag_residual = 0.0;  // max |Im| / max |Re| of the z-FFT

  double xi(int m) const { return kPi / grid.L * (static_cast<double>(m) - grid.n / 2); }
  double dxi() const { return kPi / grid.L; }
  double at(int i, int m) const { return w[static_cast<size_t>(i) * grid.n + m]; }

  /// Lattice quadrature of W against a test function phi(x, xi).
  double pair(const std::function<double(double, double)>& phi) const;

  /// xi-marginal at each x (sum over xi times dxi).
  rvec xi_marginal() const;
};

/// Discrete Wigner transform: for each x, FFT in z of
/// f(x + eps z/2) conj(f(x - eps z/2)) / (2 pi), half-shifts by spectral phase
/// shifts. Errors out if the field has significant spectral content near the
/// Nyquist band (shifts would alias).
PhaseSpaceField wigner_transform(const WaveField& state);

/// Gaussian smoothing by gamma_eps in x and in xi (spectral multiplication);
/// input must have flavor wigner.
PhaseSpaceField husimi_transform(const PhaseSpaceField& w);

struct HusimiMomentReport {
  // Integrated identities: lhs from phase-space quadrature of W^H, rhs from f.
  double mass_lhs = 0.0, mass_rhs = 0.0;          // iint W^H  vs  ||f||^2
  double xi2_lhs = 0.0, xi2_rhs = 0.0;            // iint xi^2 W^H  vs  eps^2||grad f||^2 + eps/2 ||f||^2
  double xi1_lhs = 0.0, xi1_rhs = 0.0;            // iint xi W^H  vs  int eps Im(grad f conj f)
  double x2_lhs = 0.0, x2_rhs = 0.0;              // iint x^2 W^H  vs  ||x f||^2 + eps/2 ||f||^2
  // Pointwise-in-x identities, reported as max deviations relative to the peak:
  double marginal_dev = 0.0;   // int W^H dxi        vs  |f|^2 * gamma_eps
  double xi1_pointwise_dev = 0.0;  // int xi W^H dxi  vs  eps Im(grad f conj f) * gamma_eps
  double xi2_pointwise_dev = 0.0;  // int xi^2 W^H dxi vs
      // eps^2 |grad f|^2 * gamma_eps - (eps^2/4)|f|^2 * lap gamma_eps + (eps/2)|f|^2 * gamma_eps
  double max_rel_discrepancy = 0.0;
  bool grid_adequate = false;  // max_rel_discrepancy <= 1e-4
};

HusimiMomentReport husimi_moments(const PhaseSpaceField& wh, const WaveField& state);

/// max over the test family of |iint W phi dx dxi - int rho(x) phi(x, v(x)) dx|.
double monokinetic_gap(const PhaseSpaceField& w, const Density& rho, const rvec& velocity,
                       const std::vector<std::function<double(double, double)>>& test_family);

/// Gaussian-times-polynomial test family (1, x, xi, x^2, x xi, xi^2 against a
/// width-sigma Gaussian envelope).
std::vector<std::function<double(double, double)>> default_test_family(double sigma);

}  // namespace logdisp

#endif
