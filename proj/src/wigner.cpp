#include "logdisp/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace logdisp {

double PhaseSpaceField::pair(const std::function<double(double, double)>& phi) const {
  double acc = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.node(i);
    const double* row = &w[static_cast<size_t>(i) * grid.n];
    double s = 0.0;
    for (int m = 0; m < grid.n; ++m) s += row[m] * phi(x, xi(m));
    acc += s;
  }
  return acc * grid.h * dxi();
}

rvec PhaseSpaceField::xi_marginal() const {
  rvec out(static_cast<size_t>(grid.n), 0.0);
  for (int i = 0; i < grid.n; ++i) {
    const double* row = &w[static_cast<size_t>(i) * grid.n];
    double s = 0.0;
    for (int m = 0; m < grid.n; ++m) s += row[m];
    out[static_cast<size_t>(i)] = s * dxi();
  }
  return out;
}

namespace {

// G[m] = sum_k e^{-i xi_m z_k} g_k on the conjugate lattice; with
// z_k = -L + k h and xi_m = (pi/L)(m - n/2) this is a standard FFT with
// alternating-sign pre/post twiddles (n/2 is even for n >= 8 a power of two).
void conjugate_lattice_fft(cvec& g) {
  const int n = static_cast<int>(g.size());
  for (int k = 1; k < n; k += 2) g[static_cast<size_t>(k)] = -g[static_cast<size_t>(k)];
  fft_forward(g);
  for (int m = 1; m < n; m += 2) g[static_cast<size_t>(m)] = -g[static_cast<size_t>(m)];
}

double nyquist_band_energy_fraction(const cvec& spectrum, const Grid1D& g) {
  double tail = 0.0, total = 0.0;
  const double kcut = 0.875 * kPi / g.h;
  for (int m = 0; m < g.n; ++m) {
    const double e = std::norm(spectrum[static_cast<size_t>(m)]);
    total += e;
    if (std::abs(g.freq(m)) >= kcut) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace

PhaseSpaceField wigner_transform(const WaveField& state) {
  const Grid1D& g = state.grid;
  if (static_cast<int>(state.u.size()) != g.n) throw std::invalid_argument("wigner_transform: size mismatch");
  if (g.n > 1024) throw std::invalid_argument("wigner_transform: N capped at 1024 (phase-space arrays are O(N^2))");

  cvec spectrum = state.u;
  fft_forward(spectrum);
  const double tail_frac = nyquist_band_energy_fraction(spectrum, g);
  if (tail_frac > 1e-3)
    throw std::runtime_error("wigner_transform: spectral tail fraction " + std::to_string(tail_frac) +
                             " too large, half-shifts would alias");

  const int n = g.n;
  const double ninv = 1.0 / static_cast<double>(n);
  // shift_plus[k][j] = f(x_j + eps z_k / 2), shift_minus[k][j] = f(x_j - eps z_k / 2)
  std::vector<cvec> shift_plus(static_cast<size_t>(n)), shift_minus(static_cast<size_t>(n));
  cvec buf(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double delta = 0.5 * state.eps * g.node(k);
    for (int sgn = 0; sgn < 2; ++sgn) {
      const double d = sgn == 0 ? delta : -delta;
      for (int m = 0; m < n; ++m) {
        const double ph = g.freq(m) * d;
        buf[static_cast<size_t>(m)] = spectrum[static_cast<size_t>(m)] * cplx(std::cos(ph), std::sin(ph)) * ninv;
      }
      fft_backward(buf);
      (sgn == 0 ? shift_plus : shift_minus)[static_cast<size_t>(k)] = buf;
    }
  }

  PhaseSpaceField out;
  out.grid = g;
  out.eps = state.eps;
  out.flavor = PhaseSpaceFlavor::wigner;
  out.w.resize(static_cast<size_t>(n) * static_cast<size_t>(n));
  const double scale = g.h / (2.0 * kPi);
  double max_re = 0.0, max_im = 0.0;
  cvec row(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    // z = -L has no mirror node on the lattice; dropping it truncates the z
    // window symmetrically and leaves an exactly Hermitian sequence, so the
    // transform is real to roundoff.
    row[0] = 0.0;
    for (int k = 1; k < n; ++k)
      row[static_cast<size_t>(k)] = shift_plus[static_cast<size_t>(k)][static_cast<size_t>(j)] *
                                    std::conj(shift_minus[static_cast<size_t>(k)][static_cast<size_t>(j)]);
    conjugate_lattice_fft(row);
    double* wrow = &out.w[static_cast<size_t>(j) * static_cast<size_t>(n)];
    for (int m = 0; m < n; ++m) {
      const cplx v = scale * row[static_cast<size_t>(m)];
      wrow[m] = v.real();
      max_re = std::max(max_re, std::abs(v.real()));
      max_im = std::max(max_im, std::abs(v.imag()));
    }
  }
  out.imag_residual = max_re > 0.0 ? max_im / max_re : 0.0;
  return out;
}

PhaseSpaceField husimi_transform(const PhaseSpaceField& w) {
  if (w.flavor != PhaseSpaceFlavor::wigner)
    throw std::invalid_argument("husimi_transform: input must be a Wigner field");
  const Grid1D& g = w.grid;
  const int n = g.n;
  PhaseSpaceField out = w;
  out.flavor = PhaseSpaceFlavor::husimi;

  // Convolution with gamma_eps along xi: multiply the conjugate z-space by
  // e^{-eps z^2/4}. The z lattice of the xi-FFT is the spatial lattice.
  cvec row(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    double* wrow = &out.w[static_cast<size_t>(j) * static_cast<size_t>(n)];
    for (int m = 0; m < n; ++m) row[static_cast<size_t>(m)] = wrow[m];
    // inverse of the conjugate-lattice transform, damp, transform back
    for (int m = 1; m < n; m += 2) row[static_cast<size_t>(m)] = -row[static_cast<size_t>(m)];
    fft_backward(row);
    const double ninv = 1.0 / static_cast<double>(n);
    for (int k = 0; k < n; ++k) {
      const double z = g.node(k);
      row[static_cast<size_t>(k)] *= std::exp(-0.25 * w.eps * z * z) * ninv;
    }
    fft_forward(row);
    for (int k = 1; k < n; k += 2) row[static_cast<size_t>(k)] = -row[static_cast<size_t>(k)];
    for (int m = 0; m < n; ++m) wrow[m] = row[static_cast<size_t>(m)].real();
  }

  // Convolution with gamma_eps along x: spectral multiplication by e^{-eps k^2/4}.
  cvec col(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < n; ++j) col[static_cast<size_t>(j)] = out.w[static_cast<size_t>(j) * n + m];
    fft_forward(col);
    const double ninv = 1.0 / static_cast<double>(n);
    for (int q = 0; q < n; ++q) {
      const double k = g.freq(q);
      col[static_cast<size_t>(q)] *= std::exp(-0.25 * w.eps * k * k) * ninv;
    }
    fft_backward(col);
    for (int j = 0; j < n; ++j) out.w[static_cast<size_t>(j) * n + m] = col[static_cast<size_t>(j)].real();
  }
  return out;
}

HusimiMomentReport husimi_moments(const PhaseSpaceField& wh, const WaveField& state) {
  if (wh.flavor != PhaseSpaceFlavor::husimi)
    throw std::invalid_argument("husimi_moments: input must be a Husimi field");
  const Grid1D& g = wh.grid;
  const double eps = wh.eps;
  HusimiMomentReport r;

  r.mass_lhs = wh.pair([](double, double) { return 1.0; });
  r.xi2_lhs = wh.pair([](double, double xi) { return xi * xi; });
  r.xi1_lhs = wh.pair([](double, double xi) { return xi; });
  r.x2_lhs = wh.pair([](double x, double) { return x * x; });

  const cvec du = spectral_derivative(state.u, g, 1);
  double mass_sq = 0.0, grad_sq = 0.0, ang = 0.0, x2f = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    const double r2 = std::norm(state.u[static_cast<size_t>(j)]);
    mass_sq += r2;
    grad_sq += std::norm(du[static_cast<size_t>(j)]);
    ang += (du[static_cast<size_t>(j)] * std::conj(state.u[static_cast<size_t>(j)])).imag();
    x2f += x * x * r2;
  }
  mass_sq *= g.h;
  grad_sq *= g.h;
  ang *= g.h;
  x2f *= g.h;

  r.mass_rhs = mass_sq;
  r.xi2_rhs = eps * eps * grad_sq + 0.5 * eps * mass_sq;
  r.xi1_rhs = eps * ang;
  r.x2_rhs = x2f + 0.5 * eps * mass_sq;

  // Pointwise-in-x identities: convolutions with gamma_eps evaluated as
  // Fourier multipliers e^{-eps k^2/4} (and -k^2 e^{-eps k^2/4} for the
  // Laplacian of the mollifier).
  auto smooth = [&](const rvec& in, bool laplacian) {
    cvec c(static_cast<size_t>(g.n));
    for (int j = 0; j < g.n; ++j) c[static_cast<size_t>(j)] = in[static_cast<size_t>(j)];
    fft_forward(c);
    const double ninv = 1.0 / static_cast<double>(g.n);
    for (int m = 0; m < g.n; ++m) {
      const double k = g.freq(m);
      double mult = std::exp(-0.25 * eps * k * k) * ninv;
      if (laplacian) mult *= -k * k;
      c[static_cast<size_t>(m)] *= mult;
    }
    fft_backward(c);
    rvec out(static_cast<size_t>(g.n));
    for (int j = 0; j < g.n; ++j) out[static_cast<size_t>(j)] = c[static_cast<size_t>(j)].real();
    return out;
  };

  rvec dens(static_cast<size_t>(g.n)), grad_dens(static_cast<size_t>(g.n)), cur(static_cast<size_t>(g.n));
  for (int j = 0; j < g.n; ++j) {
    dens[static_cast<size_t>(j)] = std::norm(state.u[static_cast<size_t>(j)]);
    grad_dens[static_cast<size_t>(j)] = std::norm(du[static_cast<size_t>(j)]);
    cur[static_cast<size_t>(j)] = (du[static_cast<size_t>(j)] * std::conj(state.u[static_cast<size_t>(j)])).imag();
  }
  const rvec dens_s = smooth(dens, false);
  const rvec dens_lap = smooth(dens, true);
  const rvec grad_s = smooth(grad_dens, false);
  const rvec cur_s = smooth(cur, false);

  const rvec marg = wh.xi_marginal();
  rvec marg_xi(static_cast<size_t>(g.n), 0.0), marg_xi2(static_cast<size_t>(g.n), 0.0);
  for (int i = 0; i < g.n; ++i) {
    const double* row = &wh.w[static_cast<size_t>(i) * g.n];
    double s1 = 0.0, s2 = 0.0;
    for (int m = 0; m < g.n; ++m) {
      const double xi = wh.xi(m);
      s1 += xi * row[m];
      s2 += xi * xi * row[m];
    }
    marg_xi[static_cast<size_t>(i)] = s1 * wh.dxi();
    marg_xi2[static_cast<size_t>(i)] = s2 * wh.dxi();
  }
  double peak0 = 0.0, peak2 = 0.0;
  for (int j = 0; j < g.n; ++j) {
    peak0 = std::max(peak0, std::abs(dens_s[static_cast<size_t>(j)]));
    peak2 = std::max(peak2, std::abs(marg_xi2[static_cast<size_t>(j)]));
  }
  for (int j = 0; j < g.n; ++j) {
    const size_t i = static_cast<size_t>(j);
    r.marginal_dev = std::max(r.marginal_dev, std::abs(marg[i] - dens_s[i]) / peak0);
    r.xi1_pointwise_dev = std::max(r.xi1_pointwise_dev, std::abs(marg_xi[i] - eps * cur_s[i]) / peak2);
    const double rhs2 = eps * eps * grad_s[i] - 0.25 * eps * eps * dens_lap[i] + 0.5 * eps * dens_s[i];
    r.xi2_pointwise_dev = std::max(r.xi2_pointwise_dev, std::abs(marg_xi2[i] - rhs2) / peak2);
  }

  auto rel = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); };
  r.max_rel_discrepancy = std::max({rel(r.mass_lhs, r.mass_rhs), rel(r.xi2_lhs, r.xi2_rhs), rel(r.x2_lhs, r.x2_rhs)});
  // The first moment may legitimately vanish; compare it on the xi2 scale.
  r.max_rel_discrepancy =
      std::max(r.max_rel_discrepancy, std::abs(r.xi1_lhs - r.xi1_rhs) / std::max(r.xi2_lhs, 1e-300));
  r.max_rel_discrepancy = std::max({r.max_rel_discrepancy, r.marginal_dev, r.xi1_pointwise_dev, r.xi2_pointwise_dev});
  r.grid_adequate = r.max_rel_discrepancy <= 1e-4;
  return r;
}

double monokinetic_gap(const PhaseSpaceField& w, const Density& rho, const rvec& velocity,
                       const std::vector<std::function<double(double, double)>>& test_family) {
  if (test_family.empty()) throw std::invalid_argument("monokinetic_gap: empty test family");
  if (!(rho.grid() == w.grid)) throw std::invalid_argument("monokinetic_gap: grids differ");
  if (velocity.size() != rho.values().size()) throw std::invalid_argument("monokinetic_gap: size mismatch");
  const Grid1D& g = w.grid;
  double gap = 0.0;
  for (const auto& phi : test_family) {
    const double lhs = w.pair(phi);
    double rhs = 0.0;
    for (int j = 0; j < g.n; ++j)
      rhs += rho.values()[static_cast<size_t>(j)] * phi(g.node(j), velocity[static_cast<size_t>(j)]);
    rhs *= g.h;
    gap = std::max(gap, std::abs(lhs - rhs));
  }
  return gap;
}

std::vector<std::function<double(double, double)>> default_test_family(double sigma) {
  const double s2 = 2.0 * sigma * sigma;
  auto env = [s2](double x, double xi) { return std::exp(-(x * x + xi * xi) / s2); };
  std::vector<std::function<double(double, double)>> fam;
  fam.push_back([env](double x, double xi) { return env(x, xi); });
  fam.push_back([env](double x, double xi) { return x * env(x, xi); });
  fam.push_back([env](double x, double xi) { return xi * env(x, xi); });
  fam.push_back([env](double x, double xi) { return x * x * env(x, xi); });
  fam.push_back([env](double x, double xi) { return x * xi * env(x, xi); });
  fam.push_back([env](double x, double xi) { return xi * xi * env(x, xi); });
  return fam;
}

}  // namespace logdisp
