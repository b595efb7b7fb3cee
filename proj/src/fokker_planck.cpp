#include "logdisp/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "logdisp/metrics.hpp"

namespace logdisp {

double fp_kernel(double t, double x, double y) {
  if (!(t > 0.0)) throw std::domain_error("fp_kernel: t must be positive");
  const double q = std::exp(-2.0 * t);
  const double v = 1.0 - q * q;  // 1 - e^{-4t}
  const double d = x - q * y;
  return std::exp(-d * d / v) / std::sqrt(kPi * v);
}

FPKernelEval FPKernelEval::assemble(double t, const Grid1D& g) {
  if (!(t > 0.0)) throw std::domain_error("FPKernelEval: t must be positive");
  FPKernelEval ke;
  ke.t = t;
  ke.grid = g;
  ke.k.resize(static_cast<size_t>(g.n) * static_cast<size_t>(g.n));
  const double q = std::exp(-2.0 * t);
  const double v = 1.0 - q * q;
  const double c = 1.0 / std::sqrt(kPi * v);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    double* row = &ke.k[static_cast<size_t>(i) * static_cast<size_t>(g.n)];
    for (int j = 0; j < g.n; ++j) {
      const double d = x - q * g.node(j);
      row[j] = c * std::exp(-d * d / v);
    }
  }
  return ke;
}

double FPKernelEval::column_mass_defect() const {
  double worst = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    double s = 0.0;
    for (int i = 0; i < grid.n; ++i) s += k[static_cast<size_t>(i) * grid.n + j];
    worst = std::max(worst, std::abs(grid.h * s - 1.0));
  }
  return worst;
}

rvec fp_apply(const FPKernelEval& kernel, const rvec& f0) {
  const Grid1D& g = kernel.grid;
  if (static_cast<int>(f0.size()) != g.n) throw std::invalid_argument("fp_apply: size mismatch");
  rvec out(f0.size(), 0.0);
  for (int i = 0; i < g.n; ++i) {
    const double* row = &kernel.k[static_cast<size_t>(i) * g.n];
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += row[j] * f0[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = g.h * s;
  }
  return out;
}

rvec fp_apply(double t, const rvec& f0, const Grid1D& g) {
  return fp_apply(FPKernelEval::assemble(t, g), f0);
}

double fp_from_heat_check(const rvec& f0, double t, const Grid1D& g) {
  if (!(t > 0.0)) throw std::domain_error("fp_from_heat_check: t must be positive");
  const rvec via_kernel = fp_apply(t, f0, g);

  // Heat route on the dilated grid with half-width e^{2t} L and the same N:
  // its nodes are exactly e^{2t} x_i, so no resampling of the result is needed.
  const double scale = std::exp(2.0 * t);
  const Grid1D gh = Grid1D::make(scale * g.L, g.n);
  cvec spectrum(f0.size());
  for (size_t j = 0; j < f0.size(); ++j) spectrum[j] = f0[j];
  fft_forward(spectrum);
  cvec hdata(gh.n);
  for (int j = 0; j < gh.n; ++j) {
    const double x = gh.node(j);
    hdata[static_cast<size_t>(j)] = std::abs(x) <= g.L ? trig_eval(spectrum, g, x) : cplx(0.0);
  }
  const double s = 0.5 * (std::exp(4.0 * t) - 1.0);
  fft_forward(hdata);
  const double ninv = 1.0 / static_cast<double>(gh.n);
  for (int m = 0; m < gh.n; ++m) {
    const double k = gh.freq(m);
    hdata[static_cast<size_t>(m)] *= std::exp(-0.5 * s * k * k) * ninv;
  }
  fft_backward(hdata);

  double peak = 0.0;
  for (double v : via_kernel) peak = std::max(peak, std::abs(v));
  double worst = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double via_heat = scale * hdata[static_cast<size_t>(i)].real();
    worst = std::max(worst, std::abs(via_heat - via_kernel[static_cast<size_t>(i)]));
  }
  return worst / peak;
}

TimeSampledSource sample_source(const std::function<double(double, double)>& h, double t,
                                int n_time, const Grid1D& g) {
  if (n_time < 3) throw std::invalid_argument("sample_source: need at least 3 time samples");
  TimeSampledSource src;
  src.u.resize(static_cast<size_t>(n_time));
  src.values.resize(static_cast<size_t>(n_time));
  for (int k = 0; k < n_time; ++k) {
    const double u = t * static_cast<double>(k) / static_cast<double>(n_time - 1);
    src.u[static_cast<size_t>(k)] = u;
    rvec v(g.n);
    for (int j = 0; j < g.n; ++j) v[static_cast<size_t>(j)] = h(u, g.node(j));
    src.values[static_cast<size_t>(k)] = std::move(v);
  }
  return src;
}

namespace {

// Propagated source terms e^{(t-u_k)L} h(u_k); the u = t endpoint is the identity.
std::vector<rvec> propagate_source(const TimeSampledSource& h, double t, const Grid1D& g) {
  std::vector<rvec> prop(h.u.size());
  for (size_t k = 0; k < h.u.size(); ++k) {
    const double delta = t - h.u[k];
    prop[k] = delta > 0.0 ? fp_apply(delta, h.values[k], g) : h.values[k];
  }
  return prop;
}

// Damped trapezoid over every `stride`-th node of the propagated terms.
rvec duhamel_sum(const std::vector<rvec>& prop, const TimeSampledSource& h, int n, double t,
                 const Grid1D& g, size_t stride) {
  std::vector<size_t> idx;
  for (size_t k = 0; k < h.u.size(); k += stride) idx.push_back(k);
  if (idx.back() != h.u.size() - 1) idx.push_back(h.u.size() - 1);
  rvec acc(g.n, 0.0);
  for (size_t m = 0; m < idx.size(); ++m) {
    const size_t k = idx[m];
    const double w = (m == 0 ? 0.5 * (h.u[idx[1]] - h.u[idx[0]])
                             : (m + 1 == idx.size() ? 0.5 * (h.u[idx[m]] - h.u[idx[m - 1]])
                                                    : 0.5 * (h.u[idx[m + 1]] - h.u[idx[m - 1]])));
    const double damp = w * std::exp(-2.0 * static_cast<double>(n) * (t - h.u[k]));
    for (int j = 0; j < g.n; ++j) acc[static_cast<size_t>(j)] += damp * prop[k][static_cast<size_t>(j)];
  }
  return acc;
}

}  // namespace

rvec fp_duhamel(const TimeSampledSource& h, int n, double t, const Grid1D& g,
                double* richardson_defect) {
  if (n < 0 || n > 4) throw std::invalid_argument("fp_duhamel: n must be in {0,...,4}");
  if (h.u.size() < 5) throw std::invalid_argument("fp_duhamel: insufficient time samples");
  if (std::abs(h.u.back() - t) > 1e-12 * std::max(1.0, t))
    throw std::invalid_argument("fp_duhamel: source lattice must cover [0, t]");

  const std::vector<rvec> prop = propagate_source(h, t, g);
  const rvec fine = duhamel_sum(prop, h, n, t, g, 1);
  const rvec coarse = duhamel_sum(prop, h, n, t, g, 2);
  double defect = 0.0, scale = 0.0;
  for (int j = 0; j < g.n; ++j) {
    defect = std::max(defect, std::abs(fine[static_cast<size_t>(j)] - coarse[static_cast<size_t>(j)]));
    scale = std::max(scale, std::abs(fine[static_cast<size_t>(j)]));
  }
  defect = scale > 0.0 ? defect / (3.0 * scale) : 0.0;  // trapezoid Richardson factor
  if (richardson_defect) *richardson_defect = defect;
  if (defect > 1e-3)
    throw std::runtime_error("fp_duhamel: time quadrature not converged (Richardson defect " +
                             std::to_string(defect) + ")");
  if (n == 0) return fine;
  return spectral_derivative(fine, g, n);
}

rvec fp_duhamel_time_derivative(const TimeSampledSource& h, int n, double t, const Grid1D& g) {
  const rvec gsol = fp_duhamel(h, n, t, g);
  // L g = g'' + (2 y g)'
  const rvec d2 = spectral_derivative(gsol, g, 2);
  rvec ytimes(gsol.size());
  for (int j = 0; j < g.n; ++j) ytimes[static_cast<size_t>(j)] = 2.0 * g.node(j) * gsol[static_cast<size_t>(j)];
  const rvec dyg = spectral_derivative(ytimes, g, 1);

  rvec h_end = h.values.back();
  if (std::abs(h.u.back() - t) > 1e-9) throw std::invalid_argument("fp_duhamel_time_derivative: lattice must end at t");
  const rvec dnh_end = n > 0 ? spectral_derivative(h_end, g, n) : h_end;
  rvec prop0 = fp_apply(t, h.values.front(), g);
  const rvec dnprop0 = n > 0 ? spectral_derivative(prop0, g, n) : prop0;
  const double damp = std::exp(-2.0 * static_cast<double>(n) * t);

  rvec f(gsol.size());
  for (int j = 0; j < g.n; ++j)
    f[static_cast<size_t>(j)] = d2[static_cast<size_t>(j)] + dyg[static_cast<size_t>(j)] +
                                dnh_end[static_cast<size_t>(j)] - damp * dnprop0[static_cast<size_t>(j)];
  return f;
}

std::vector<FPDecayRow> fp_decay_certificate(const TimeSampledSource& h, int n,
                                             const std::vector<double>& t_values, const Grid1D& g) {
  if (n < 1 || n > 2) throw std::invalid_argument("fp_decay_certificate: n must be 1 or 2");
  std::vector<FPDecayRow> rows;
  for (double t : t_values) {
    // Restrict the lattice to [0, t].
    TimeSampledSource cut;
    for (size_t k = 0; k < h.u.size(); ++k) {
      if (h.u[k] <= t * (1.0 + 1e-12)) {
        cut.u.push_back(h.u[k]);
        cut.values.push_back(h.values[k]);
      }
    }
    if (std::abs(cut.u.back() - t) > 1e-9)
      throw std::invalid_argument("fp_decay_certificate: t not on the source lattice");

    double defect = 0.0;
    const rvec f = fp_duhamel(cut, n, t, g, &defect);

    FPDecayRow row;
    row.t = t;
    row.n = n;
    row.lhs_wn = n == 1 ? neg_sobolev_w11(f, g) : neg_sobolev_w21(f, g);
    // ||f||_{W^{-n+1,1}}: n=1 -> L1 of f; n=2 -> primitive L1 of f.
    if (n == 1) {
      double l1 = 0.0;
      for (double v : f) l1 += std::abs(v);
      row.lhs_wn1 = g.h * l1;
    } else {
      row.lhs_wn1 = neg_sobolev_w11(f, g);
    }

    // Right-hand sides. |h|(u) = int |h(u,y)| dy; time integrals by trapezoid,
    // except the integrable (1-e^{-4(t-u)})^{-1/2} endpoint singularity whose
    // last subinterval is integrated in closed form with |h| frozen at u = t.
    auto habs = [&](size_t k) {
      double s = 0.0;
      for (double v : cut.values[k]) s += std::abs(v);
      return g.h * s;
    };
    const double nn = static_cast<double>(n);
    const double du = cut.u[1] - cut.u[0];
    const size_t last = cut.u.size() - 1;
    double i_wn = 0.0, i_wn1 = 0.0, sup_factor = 0.0;
    for (size_t k = 0; k <= last; ++k) {
      const double u = cut.u[k];
      const double a = habs(k);
      const double w_full = (k == 0 || k == last) ? 0.5 : 1.0;
      i_wn += w_full * du * std::exp(2.0 * nn * u) * a;
      if (k < last) {
        const double w_reg = (k == 0 || k == last - 1) ? 0.5 : 1.0;
        i_wn1 += w_reg * du * std::exp(2.0 * nn * u) *
                 std::pow(1.0 - std::exp(-4.0 * (t - u)), -0.5) * a;
      }
      sup_factor = std::max(sup_factor, std::exp(2.0 * (nn - 1.0) * u) * a);
    }
    // int_0^{du} (1-e^{-4v})^{-1/2} dv = (1/2) atanh(sqrt(1-e^{-4 du}))
    i_wn1 += std::exp(2.0 * nn * t) * habs(last) * 0.5 *
             std::atanh(std::sqrt(1.0 - std::exp(-4.0 * du)));

    const double kgrad = 2.0 / std::sqrt(kPi);  // ||gamma^2||_{W^{1,1}} / pi^{1/2}, d = 1
    row.rhs_wn = std::exp(-2.0 * nn * t) * i_wn;
    row.rhs_wn1 = kgrad * std::exp(-2.0 * nn * t) * i_wn1;
    // Second form: int e^{-2u}(1-e^{-4u})^{-1/2} du = -(1/2) asin(e^{-2u}) + C.
    const double integral = 0.5 * (std::asin(1.0) - std::asin(std::exp(-2.0 * t)));
    row.rhs_wn1_sup = kgrad * std::exp(-2.0 * (nn - 1.0) * t) * integral * sup_factor;
    row.pass = row.lhs_wn * 1.05 <= row.rhs_wn && row.lhs_wn1 * 1.05 <= row.rhs_wn1 &&
               row.lhs_wn1 * 1.05 <= row.rhs_wn1_sup;
    rows.push_back(row);
  }
  return rows;
}

std::vector<W2ContractionRow> w2_contraction_check(const Density& f0,
                                                   const std::vector<double>& t_values) {
  const Grid1D& g = f0.grid();
  if (!(f0.mass() > 1e-12)) throw std::domain_error("w2_contraction_check: degenerate density");
  const double inv_mass = 1.0 / f0.mass();
  rvec p0(f0.values());
  for (double& v : p0) v *= inv_mass;
  rvec st = gamma_sq(g);
  const double stn = 1.0 / quadrature(st, g);
  for (double& v : st) v *= stn;
  const Density stationary(g, st);
  const Density start(g, p0);
  const double w2_initial = wasserstein_1d(2.0, start, stationary);

  std::vector<W2ContractionRow> rows;
  for (double t : t_values) {
    rvec ft = fp_apply(t, p0, g);
    const Density dft(g, ft);
    W2ContractionRow row;
    row.t = t;
    row.w2 = wasserstein_1d(2.0, dft, stationary);
    row.w2_bound = std::exp(-2.0 * t) * w2_initial;
    row.pass = row.w2 <= row.w2_bound * (1.0 + 1e-6);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace logdisp
