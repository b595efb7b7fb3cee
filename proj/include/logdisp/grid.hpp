#ifndef LOGDISP_GRID_HPP
#define LOGDISP_GRID_HPP

#include <complex>
#include <vector>

namespace logdisp {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Uniform periodic grid on [-L, L) with N = power of two nodes, x_j = -L + j*h.
struct Grid1D {
  double L = 0.0;
  int n = 0;
  double h = 0.0;

  static Grid1D make(double L, int n);

  double node(int j) const { return -L + h * static_cast<double>(j); }

  /// Signed FFT frequency of mode m (step pi/L, Nyquist mapped to -n/2).
  double freq(int m) const {
    const int s = (m <= n / 2 - 1) ? m : m - n;
    return kPi / L * static_cast<double>(s);
  }

  bool operator==(const Grid1D& o) const { return L == o.L && n == o.n; }
};

Grid1D make_grid(double L, int n);

/// Trapezoid quadrature on the periodic grid (= h * sum). Spectrally accurate
/// for smooth decaying integrands.
double quadrature(const rvec& values, const Grid1D& g);
cplx quadrature(const cvec& values, const Grid1D& g);

// In-place power-of-two complex FFT (FFTW backend, cached plans).
void fft_forward(cvec& a);   // sum_j a_j e^{-2 pi i j k / n}
void fft_backward(cvec& a);  // unnormalized inverse

/// Exact Fourier differentiation of the trigonometric interpolant.
cvec spectral_derivative(const cvec& field, const Grid1D& g, int order);
rvec spectral_derivative(const rvec& field, const Grid1D& g, int order);

/// f(x + delta) for every node, by spectral phase shift (exact for
/// band-limited fields; delta need not be a grid multiple).
cvec spectral_shift(const cvec& field, const Grid1D& g, double delta);

/// Evaluate the trigonometric interpolant of `field` at an arbitrary point.
/// `spectrum` must be the forward FFT of the nodal values.
cplx trig_eval(const cvec& spectrum, const Grid1D& g, double x);

/// Nonnegative real function on a grid with cached mass, moments and entropy.
/// Immutable after construction.
class Density {
 public:
  Density(Grid1D g, rvec values);

  const Grid1D& grid() const { return grid_; }
  const rvec& values() const { return rho_; }
  double mass() const { return m0_; }
  double moment1() const { return m1_; }
  double moment2() const { return m2_; }
  /// int rho ln rho with the 0 ln 0 = 0 convention.
  double entropy() const { return ent_; }

  /// Mean and raw second moment of the normalized density; rejects mass < 1e-12.
  double mean() const;

 private:
  Grid1D grid_;
  rvec rho_;
  double m0_, m1_, m2_, ent_;
};

/// gamma(x) = e^{-x^2/2} sampled on the grid.
rvec gamma_profile(const Grid1D& g);
/// gamma^2(x) = e^{-x^2} sampled on the grid.
rvec gamma_sq(const Grid1D& g);
/// Normal density with given mean and variance.
rvec normal_density(const Grid1D& g, double mean, double var);

}  // namespace logdisp

#endif
