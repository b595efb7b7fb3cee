#include "logdisp/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace logdisp {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW plans per transform size. Plans are created with FFTW_ESTIMATE (results
// do not depend on measurement noise) and FFTW_UNALIGNED so they can execute on
// any caller buffer. Creation is serialized; execution is thread-safe.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  void run(cvec& a, int sign) {
    fftw_plan p;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto key = std::make_pair(static_cast<int>(a.size()), sign);
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        p = fftw_plan_dft_1d(static_cast<int>(a.size()), nullptr, nullptr, sign,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_[key] = p;
      } else {
        p = it->second;
      }
    }
    auto* buf = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(p, buf, buf);
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void require_finite(const rvec& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

void require_finite(const cvec& v, const char* what) {
  for (const cplx& x : v)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace

Grid1D Grid1D::make(double L, int n) {
  if (!(L > 0.0)) throw std::invalid_argument("Grid1D: L must be positive");
  if (n < 8 || !is_pow2(n)) throw std::invalid_argument("Grid1D: N must be a power of two >= 8");
  Grid1D g;
  g.L = L;
  g.n = n;
  g.h = 2.0 * L / static_cast<double>(n);
  return g;
}

Grid1D make_grid(double L, int n) { return Grid1D::make(L, n); }

double quadrature(const rvec& values, const Grid1D& g) {
  if (static_cast<int>(values.size()) != g.n) throw std::invalid_argument("quadrature: size mismatch");
  require_finite(values, "quadrature");
  double s = 0.0;
  for (double v : values) s += v;
  return g.h * s;
}

cplx quadrature(const cvec& values, const Grid1D& g) {
  if (static_cast<int>(values.size()) != g.n) throw std::invalid_argument("quadrature: size mismatch");
  require_finite(values, "quadrature");
  cplx s = 0.0;
  for (const cplx& v : values) s += v;
  return g.h * s;
}

void fft_forward(cvec& a) { PlanCache::instance().run(a, FFTW_FORWARD); }
void fft_backward(cvec& a) { PlanCache::instance().run(a, FFTW_BACKWARD); }

cvec spectral_derivative(const cvec& field, const Grid1D& g, int order) {
  if (static_cast<int>(field.size()) != g.n) throw std::invalid_argument("spectral_derivative: size mismatch");
  if (order < 1) throw std::invalid_argument("spectral_derivative: order must be >= 1");
  require_finite(field, "spectral_derivative");
  cvec a = field;
  fft_forward(a);
  const double ninv = 1.0 / static_cast<double>(g.n);
  for (int m = 0; m < g.n; ++m) {
    cplx mult = std::pow(cplx(0.0, g.freq(m)), order);
    // Zero the Nyquist mode for odd orders so real fields stay real.
    if (m == g.n / 2 && (order % 2) == 1) mult = 0.0;
    a[m] *= mult * ninv;
  }
  fft_backward(a);
  return a;
}

rvec spectral_derivative(const rvec& field, const Grid1D& g, int order) {
  cvec c(field.size());
  for (size_t j = 0; j < field.size(); ++j) c[j] = field[j];
  cvec d = spectral_derivative(c, g, order);
  rvec out(field.size());
  for (size_t j = 0; j < field.size(); ++j) out[j] = d[j].real();
  return out;
}

cvec spectral_shift(const cvec& field, const Grid1D& g, double delta) {
  if (static_cast<int>(field.size()) != g.n) throw std::invalid_argument("spectral_shift: size mismatch");
  cvec a = field;
  fft_forward(a);
  const double ninv = 1.0 / static_cast<double>(g.n);
  for (int m = 0; m < g.n; ++m) {
    const double kd = g.freq(m) * delta;
    a[m] *= cplx(std::cos(kd), std::sin(kd)) * ninv;
  }
  fft_backward(a);
  return a;
}

cplx trig_eval(const cvec& spectrum, const Grid1D& g, double x) {
  // u(x) = (1/n) sum_m uhat_m e^{i k_m (x + L)}
  cplx s = 0.0;
  for (int m = 0; m < g.n; ++m) {
    const double ph = g.freq(m) * (x + g.L);
    s += spectrum[m] * cplx(std::cos(ph), std::sin(ph));
  }
  return s / static_cast<double>(g.n);
}

Density::Density(Grid1D g, rvec values) : grid_(g), rho_(std::move(values)) {
  if (static_cast<int>(rho_.size()) != grid_.n) throw std::invalid_argument("Density: size mismatch");
  require_finite(rho_, "Density");
  for (double v : rho_)
    if (v < 0.0) throw std::invalid_argument("Density: negative value");
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, se = 0.0;
  for (int j = 0; j < grid_.n; ++j) {
    const double y = grid_.node(j);
    const double r = rho_[j];
    s0 += r;
    s1 += y * r;
    s2 += y * y * r;
    if (r > 0.0) se += r * std::log(r);
  }
  m0_ = grid_.h * s0;
  m1_ = grid_.h * s1;
  m2_ = grid_.h * s2;
  ent_ = grid_.h * se;
}

double Density::mean() const {
  if (m0_ < 1e-12) throw std::domain_error("Density: mass below 1e-12, normalized moments undefined");
  return m1_ / m0_;
}

rvec gamma_profile(const Grid1D& g) {
  rvec v(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    v[j] = std::exp(-0.5 * x * x);
  }
  return v;
}

rvec gamma_sq(const Grid1D& g) {
  rvec v(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    v[j] = std::exp(-x * x);
  }
  return v;
}

rvec normal_density(const Grid1D& g, double mean, double var) {
  if (!(var > 0.0)) throw std::invalid_argument("normal_density: variance must be positive");
  rvec v(g.n);
  const double c = 1.0 / std::sqrt(2.0 * kPi * var);
  for (int j = 0; j < g.n; ++j) {
    const double d = g.node(j) - mean;
    v[j] = c * std::exp(-0.5 * d * d / var);
  }
  return v;
}

}  // namespace logdisp
