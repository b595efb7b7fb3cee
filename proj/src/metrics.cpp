#include "logdisp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace logdisp {

namespace {

// Cumulative trapezoid F_j = int_{-L}^{x_j}; F_0 = 0.
rvec cumtrapz(const rvec& f, const Grid1D& g) {
  rvec F(f.size());
  F[0] = 0.0;
  for (size_t j = 1; j < f.size(); ++j) F[j] = F[j - 1] + 0.5 * g.h * (f[j - 1] + f[j]);
  return F;
}

double trapz_abs(const rvec& F, const Grid1D& g) {
  double s = 0.5 * (std::abs(F.front()) + std::abs(F.back()));
  for (size_t j = 1; j + 1 < F.size(); ++j) s += std::abs(F[j]);
  return g.h * s;
}

// Fritsch-Carlson monotone cubic slopes for increasing data.
rvec pchip_slopes(const rvec& x, const rvec& y) {
  const size_t n = x.size();
  rvec d(n, 0.0), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return d;
}

// Quantile function sampled by inverting a monotone cubic interpolant of the CDF.
class Quantile {
 public:
  Quantile(const rvec& rho, const Grid1D& g, double mass) {
    // Keep only strictly increasing CDF knots.
    rvec F = cumtrapz(rho, g);
    const double inv = 1.0 / mass;
    x_.push_back(g.node(0));
    q_.push_back(F[0] * inv);
    for (int j = 1; j < g.n; ++j) {
      const double q = F[static_cast<size_t>(j)] * inv;
      if (q > q_.back()) {
        x_.push_back(g.node(j));
        q_.push_back(q);
      }
    }
    if (q_.size() < 4) throw std::domain_error("wasserstein_1d: degenerate density");
    slopes_ = pchip_slopes(x_, q_);
  }

  double operator()(double q) const {
    q = std::clamp(q, q_.front(), q_.back());
    size_t lo = 0, hi = q_.size() - 1;
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      (q_[mid] <= q ? lo : hi) = mid;
    }
    // Solve the cubic Hermite F(x) = q on [x_lo, x_hi] by bisection + Newton.
    const double xl = x_[lo], xr = x_[hi], dx = xr - xl;
    const double ql = q_[lo], qr = q_[hi], dl = slopes_[lo], dr = slopes_[hi];
    auto eval = [&](double s, double* deriv) {
      const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
      const double h10 = s * (1.0 - s) * (1.0 - s);
      const double h01 = s * s * (3.0 - 2.0 * s);
      const double h11 = s * s * (s - 1.0);
      if (deriv) {
        const double g00 = 6.0 * s * (s - 1.0);
        const double g10 = (1.0 - s) * (1.0 - 3.0 * s);
        const double g01 = -g00;
        const double g11 = s * (3.0 * s - 2.0);
        *deriv = g00 * ql + g10 * dx * dl + g01 * qr + g11 * dx * dr;
      }
      return h00 * ql + h10 * dx * dl + h01 * qr + h11 * dx * dr;
    };
    double a = 0.0, b = 1.0, s = (q - ql) / (qr - ql);
    for (int it = 0; it < 100; ++it) {
      double deriv;
      const double val = eval(s, &deriv);
      if (val > q)
        b = s;
      else
        a = s;
      double step = deriv != 0.0 ? (q - val) / deriv : 0.0;
      double next = s + step;
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (std::abs(val - q) < 1e-15 * std::max(1.0, std::abs(q)) || b - a < 1e-15) break;
      s = next;
    }
    return xl + s * dx;
  }

 private:
  rvec x_, q_, slopes_;
};

constexpr int kQuantileNodes = 4096;
constexpr double kTailCut = 1e-9;

}  // namespace

double wasserstein_1d(double p, const Density& rho1, const Density& rho2) {
  if (!(p >= 1.0)) throw std::invalid_argument("wasserstein_1d: p must be >= 1");
  if (!(rho1.grid() == rho2.grid())) throw std::invalid_argument("wasserstein_1d: grids differ");
  const Grid1D& g = rho1.grid();
  const double m1 = rho1.mass(), m2 = rho2.mass();
  if (std::abs(m1 - 1.0) > 1e-8 || std::abs(m2 - 1.0) > 1e-8)
    throw std::domain_error("wasserstein_1d: inputs must be probability densities (mass within 1e-8 of 1)");

  if (p == 1.0) {
    rvec F1 = cumtrapz(rho1.values(), g);
    rvec F2 = cumtrapz(rho2.values(), g);
    rvec diff(F1.size());
    for (size_t j = 0; j < F1.size(); ++j) diff[j] = F1[j] / m1 - F2[j] / m2;
    return trapz_abs(diff, g);
  }

  Quantile Q1(rho1.values(), g, m1);
  Quantile Q2(rho2.values(), g, m2);
  const double qa = kTailCut, qb = 1.0 - kTailCut;
  const double dq = (qb - qa) / static_cast<double>(kQuantileNodes - 1);
  double acc = 0.0;
  for (int i = 0; i < kQuantileNodes; ++i) {
    const double q = qa + dq * static_cast<double>(i);
    const double d = std::abs(Q1(q) - Q2(q));
    const double w = (i == 0 || i == kQuantileNodes - 1) ? 0.5 : 1.0;
    acc += w * std::pow(d, p);
  }
  return std::pow(acc * dq, 1.0 / p);
}

std::pair<double, double> csiszar_kullback_gap(const Density& rho) {
  const Grid1D& g = rho.grid();
  const double gmass = std::sqrt(kPi);
  if (std::abs(rho.mass() - gmass) > 1e-6)
    throw std::domain_error("csiszar_kullback_gap: mass must match ||gamma^2||_L1 within 1e-6");
  // int rho ln(rho/gamma^2) = int rho ln rho + int y^2 rho.
  const double lhs = rho.entropy() + rho.moment2();
  double l1 = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double y = g.node(j);
    l1 += std::abs(rho.values()[static_cast<size_t>(j)] - std::exp(-y * y));
  }
  l1 *= g.h;
  const double rhs = l1 * l1 / (2.0 * gmass);
  return {lhs, rhs};
}

double neg_sobolev_w11(const rvec& f, const Grid1D& g) {
  const double mean = quadrature(f, g);
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  if (std::abs(mean) > 1e-10 * std::max(1.0, scale * 2.0 * g.L))
    throw std::domain_error("neg_sobolev_w11: nonzero mean, primitive not integrable");
  return trapz_abs(cumtrapz(f, g), g);
}

double neg_sobolev_w21(const rvec& f, const Grid1D& g) {
  const double mean = quadrature(f, g);
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  if (std::abs(mean) > 1e-10 * std::max(1.0, scale * 2.0 * g.L))
    throw std::domain_error("neg_sobolev_w21: nonzero mean");
  rvec F1 = cumtrapz(f, g);
  // The second primitive decays only if F1 has zero mean, which equals the
  // (negated) first moment of f; check it.
  double f1_scale = 0.0;
  for (double v : F1) f1_scale = std::max(f1_scale, std::abs(v));
  if (std::abs(quadrature(F1, g)) > 1e-8 * std::max(1.0, f1_scale * 2.0 * g.L))
    throw std::domain_error("neg_sobolev_w21: first primitive does not decay (nonzero first moment)");
  return trapz_abs(cumtrapz(F1, g), g);
}

double interp_norm_constant(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("interp_norm_constant: delta in (0,1)");
  // Mollifier gamma_eta(x) = (pi eta)^{-1/2} e^{-x^2/eta}:
  //   |g - g*gamma_eta|_inf <= eta^{(1-delta)/2} Ma |g|_{C^{0,1-delta}},
  //   |grad(g*gamma_eta)|_inf <= eta^{-delta/2}  Mb |g|_{C^{0,1-delta}},
  // with moments of |u|^{1-delta} against gamma_1 resp. |gamma_1'|.
  const double ma = std::tgamma(1.0 - 0.5 * delta) / std::sqrt(kPi);
  const double mb = 2.0 * std::tgamma(1.5 - 0.5 * delta) / std::sqrt(kPi);
  const double k = std::pow(delta / (1.0 - delta), 1.0 - delta) + std::pow((1.0 - delta) / delta, delta);
  return k * std::pow(ma, delta) * std::pow(mb, 1.0 - delta);
}

double interp_norm_bound(const rvec& f, const Grid1D& g, double delta) {
  const double w = neg_sobolev_w11(f, g);
  double l1 = 0.0;
  for (double v : f) l1 += std::abs(v);
  l1 *= g.h;
  return interp_norm_constant(delta) * std::pow(w, 1.0 - delta) * std::pow(l1, delta);
}

}  // namespace logdisp
