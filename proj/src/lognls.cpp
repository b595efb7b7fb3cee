#include "logdisp/lognls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace logdisp {

namespace {

double max_abs_sq(const cvec& u) {
  double m = 0.0;
  for (const cplx& z : u) m = std::max(m, std::norm(z));
  return m;
}

void require_valid(const WaveField& s, const char* what) {
  if (static_cast<int>(s.u.size()) != s.grid.n) throw std::invalid_argument(std::string(what) + ": size mismatch");
  if (!(s.eps > 0.0)) throw std::invalid_argument(std::string(what) + ": eps must be positive");
}

// Kinetic multiplier for time step dt, including the 1/n FFT normalization.
cvec kinetic_multiplier(const Grid1D& g, double eps, double dt) {
  cvec m(g.n);
  const double ninv = 1.0 / static_cast<double>(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double k = g.freq(j);
    const double ph = -0.5 * eps * k * k * dt;
    m[j] = cplx(std::cos(ph), std::sin(ph)) * ninv;
  }
  return m;
}

void apply_multiplier(cvec& u, const cvec& m) {
  fft_forward(u);
  for (size_t j = 0; j < u.size(); ++j) u[j] *= m[j];
  fft_backward(u);
}

void nonlinear_phase(cvec& u, double lambda, double eps, double dt, double delta_vac_rel) {
  const double dvac = delta_vac_rel * max_abs_sq(u);
  const double c = -lambda * dt / eps;
  for (cplx& z : u) {
    const double r2 = std::max(std::norm(z), dvac);
    if (r2 == 0.0) continue;
    const double ph = c * std::log(r2);
    z *= cplx(std::cos(ph), std::sin(ph));
  }
}

void check_finite(const WaveField& s) {
  for (const cplx& z : s.u)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::runtime_error("strang_step: non-finite field, step rejected");
}

void cubic_interp_periodic(const cvec& u, const Grid1D& g, double x, cplx* out) {
  // 4-point Lagrange with periodic wrap; used only within one cell of the edge.
  const double s = (x + g.L) / g.h;
  const long long j0 = static_cast<long long>(std::floor(s));
  const double f = s - static_cast<double>(j0);
  cplx acc = 0.0;
  const double w[4] = {-f * (f - 1.0) * (f - 2.0) / 6.0, (f * f - 1.0) * (f - 2.0) / 2.0,
                       -f * (f + 1.0) * (f - 2.0) / 2.0, f * (f * f - 1.0) / 6.0};
  for (int k = -1; k <= 2; ++k) {
    long long j = ((j0 + k) % g.n + g.n) % g.n;
    acc += w[k + 1] * u[static_cast<size_t>(j)];
  }
  *out = acc;
}

}  // namespace

double WaveField::mass() const {
  double s = 0.0;
  for (const cplx& z : u) s += std::norm(z);
  return std::sqrt(grid.h * s);
}

WaveField strang_step(const WaveField& state, double lambda, double dt, const StrangParams& params) {
  require_valid(state, "strang_step");
  if (!(dt > 0.0)) throw std::invalid_argument("strang_step: dt must be positive");
  WaveField s = state;
  const cvec half = kinetic_multiplier(s.grid, s.eps, 0.5 * dt);
  apply_multiplier(s.u, half);
  nonlinear_phase(s.u, lambda, s.eps, dt, params.delta_vac_rel);
  apply_multiplier(s.u, half);
  s.t += dt;
  check_finite(s);
  return s;
}

void strang_run(WaveField& state, double lambda, double dt, long long n_steps,
                const StrangParams& params) {
  require_valid(state, "strang_run");
  if (n_steps <= 0) return;
  const cvec half = kinetic_multiplier(state.grid, state.eps, 0.5 * dt);
  const cvec full = kinetic_multiplier(state.grid, state.eps, dt);
  apply_multiplier(state.u, half);
  for (long long i = 0; i < n_steps; ++i) {
    nonlinear_phase(state.u, lambda, state.eps, dt, params.delta_vac_rel);
    apply_multiplier(state.u, i + 1 < n_steps ? full : half);
  }
  state.t += dt * static_cast<double>(n_steps);
  check_finite(state);
}

WaveField wkb_initial_data(const Grid1D& g, double eps, const WkbGaussian& d) {
  if (!(d.rho_star > 0.0) || !(d.sigma0 > 0.0))
    throw std::invalid_argument("wkb_initial_data: rho_star, sigma0 must be positive");
  WaveField s;
  s.grid = g;
  s.eps = eps;
  s.t = 0.0;
  s.u.resize(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    const double amp = std::sqrt(d.rho_star) * std::exp(-0.5 * d.sigma0 * x * x);
    const double ph = (0.5 * d.omega0 * x * x + d.p0 * x) / eps;
    s.u[j] = amp * cplx(std::cos(ph), std::sin(ph));
  }
  return s;
}

double AnsatzState::mass_sq() const { return std::exp(2.0 * c) * std::sqrt(kPi / (2.0 * a)); }

double AnsatzState::eps2_gradnorm_sq(double eps) const {
  return mass_sq() * (eps * eps * a + b * b / a + p * p);
}

AnsatzState ansatz_initial_state(const WkbGaussian& d) {
  AnsatzState s;
  s.a = 0.5 * d.sigma0;
  s.b = 0.5 * d.omega0;
  s.q = 0.0;
  s.p = d.p0;
  s.c = 0.5 * std::log(d.rho_star);
  s.phi = 0.0;
  s.t = 0.0;
  return s;
}

namespace {

struct AnsatzDeriv {
  double a, b, q, p, c, phi;
};

AnsatzDeriv ansatz_rhs(const AnsatzState& s, double eps, double lambda) {
  AnsatzDeriv d;
  d.a = -4.0 * s.a * s.b;
  d.b = 2.0 * eps * eps * s.a * s.a - 2.0 * s.b * s.b + 2.0 * lambda * s.a;
  d.q = s.p;
  d.p = 0.0;
  d.c = -s.b;
  d.phi = 0.5 * s.p * s.p - eps * eps * s.a - 2.0 * lambda * s.c;
  return d;
}

AnsatzState ansatz_axpy(const AnsatzState& s, double h, const AnsatzDeriv& d) {
  AnsatzState r = s;
  r.a += h * d.a;
  r.b += h * d.b;
  r.q += h * d.q;
  r.p += h * d.p;
  r.c += h * d.c;
  r.phi += h * d.phi;
  return r;
}

}  // namespace

AnsatzState ansatz_evolve(AnsatzState s, double eps, double lambda, double t_end, double dt) {
  if (t_end < s.t) throw std::invalid_argument("ansatz_evolve: t_end before current time");
  const long long n = static_cast<long long>(std::ceil((t_end - s.t) / dt - 1e-12));
  const double h = n > 0 ? (t_end - s.t) / static_cast<double>(n) : 0.0;
  for (long long i = 0; i < n; ++i) {
    const AnsatzDeriv k1 = ansatz_rhs(s, eps, lambda);
    const AnsatzDeriv k2 = ansatz_rhs(ansatz_axpy(s, 0.5 * h, k1), eps, lambda);
    const AnsatzDeriv k3 = ansatz_rhs(ansatz_axpy(s, 0.5 * h, k2), eps, lambda);
    const AnsatzDeriv k4 = ansatz_rhs(ansatz_axpy(s, h, k3), eps, lambda);
    AnsatzDeriv k;
    k.a = (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a) / 6.0;
    k.b = (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b) / 6.0;
    k.q = (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q) / 6.0;
    k.p = (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p) / 6.0;
    k.c = (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c) / 6.0;
    k.phi = (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi) / 6.0;
    s = ansatz_axpy(s, h, k);
    if (!(s.a > 0.0)) throw std::runtime_error("ansatz_evolve: width parameter left (0, inf)");
  }
  s.t = t_end;
  return s;
}

WaveField ansatz_to_field(const AnsatzState& s, const Grid1D& g, double eps) {
  WaveField f;
  f.grid = g;
  f.eps = eps;
  f.t = s.t;
  f.u.resize(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double X = g.node(j) - s.q;
    const double amp = std::exp(-s.a * X * X + s.c);
    const double ph = (s.b * X * X + s.p * X + s.phi) / eps;
    f.u[j] = amp * cplx(std::cos(ph), std::sin(ph));
  }
  return f;
}

WaveField gaussian_ansatz_oracle(const WkbGaussian& d, double eps, double lambda, double t,
                                 const Grid1D& g, double ode_dt) {
  AnsatzState s = ansatz_evolve(ansatz_initial_state(d), eps, lambda, t, ode_dt);
  return ansatz_to_field(s, g, eps);
}

double ansatz_pde_residual(const WkbGaussian& d, double eps, double lambda, double t,
                           const Grid1D& g, double dt_fd) {
  const WaveField um = gaussian_ansatz_oracle(d, eps, lambda, t - dt_fd, g);
  const WaveField u0 = gaussian_ansatz_oracle(d, eps, lambda, t, g);
  const WaveField up = gaussian_ansatz_oracle(d, eps, lambda, t + dt_fd, g);
  const cvec lap = spectral_derivative(u0.u, g, 2);
  double acc = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const cplx ut = (up.u[j] - um.u[j]) / (2.0 * dt_fd);
    const double r2 = std::norm(u0.u[j]);
    const cplx nl = r2 > 0.0 ? lambda * u0.u[j] * std::log(r2) : cplx(0.0);
    const cplx res = cplx(0.0, eps) * ut + 0.5 * eps * eps * lap[j] - nl;
    acc += std::norm(res);
  }
  return std::sqrt(g.h * acc);
}

EnergyReport conserved_quantities(const WaveField& state, double lambda, const StrangParams& params) {
  require_valid(state, "conserved_quantities");
  EnergyReport r;
  r.mass = state.mass();
  if (!(r.mass > 1e-12)) throw std::domain_error("conserved_quantities: degenerate mass");
  const cvec du = spectral_derivative(state.u, state.grid, 1);
  const double dvac = params.delta_vac_rel * max_abs_sq(state.u);
  double grad_sq = 0.0, ang = 0.0, ent = 0.0;
  for (int j = 0; j < state.grid.n; ++j) {
    grad_sq += std::norm(du[j]);
    ang += (std::conj(state.u[j]) * du[j]).imag();
    const double r2 = std::norm(state.u[j]);
    if (r2 >= dvac && r2 > 0.0) ent += r2 * std::log(r2);
  }
  const double h = state.grid.h;
  r.kinetic = 0.5 * state.eps * state.eps * h * grad_sq;
  r.angular_momentum = state.eps * h * ang;
  r.entropy = h * ent;
  r.energy = r.kinetic + lambda * r.entropy;
  return r;
}

WaveField rescale_to_v(const WaveField& state, const TauTrajectory& traj) {
  require_valid(state, "rescale_to_v");
  const double tau = traj.tau(state.t);
  const double taudot = traj.taudot(state.t);
  const Grid1D& g = state.grid;

  // The dilation samples u at tau*y; u must be negligible near the grid edge
  // for the implicit zero extension to be valid. Amplitude 3e-7 of the peak
  // keeps the truncated mass below 1e-12 of the total.
  const double peak = std::sqrt(max_abs_sq(state.u));
  double edge = 0.0;
  const int guard = std::max(1, g.n / 32);
  for (int j = 0; j < guard; ++j) {
    edge = std::max(edge, std::abs(state.u[static_cast<size_t>(j)]));
    edge = std::max(edge, std::abs(state.u[static_cast<size_t>(g.n - 1 - j)]));
  }
  if (edge > 3e-7 * peak)
    throw std::runtime_error("rescale_to_v: field support reaches the grid boundary");

  cvec spectrum = state.u;
  fft_forward(spectrum);

  const double norm_ratio = std::pow(kPi, 0.25) / state.mass();
  const double amp = std::sqrt(tau) * norm_ratio;
  const double chirp = -taudot * tau / (2.0 * state.eps);

  WaveField v;
  v.grid = g;
  v.eps = state.eps;
  v.t = state.t;
  v.u.assign(g.n, cplx(0.0));
  for (int j = 0; j < g.n; ++j) {
    const double y = g.node(j);
    const double x = tau * y;
    cplx w;
    if (std::abs(x) <= g.L) {
      w = trig_eval(spectrum, g, x);
    } else if (std::abs(x) <= g.L + g.h) {
      cubic_interp_periodic(state.u, g, x > 0 ? x - 2.0 * g.L : x + 2.0 * g.L, &w);
    } else {
      continue;
    }
    const double ph = chirp * y * y;
    v.u[j] = amp * w * cplx(std::cos(ph), std::sin(ph));
  }
  return v;
}

Density rescaled_density(const WaveField& state, const TauTrajectory& traj, const Grid1D& target) {
  require_valid(state, "rescaled_density");
  const Grid1D& g = state.grid;
  const double tau = traj.tau(state.t);
  rvec dens(state.u.size());
  for (size_t j = 0; j < state.u.size(); ++j) dens[j] = std::norm(state.u[j]);
  const double m2 = state.mass() * state.mass();
  const double amp = tau * std::sqrt(kPi) / m2;
  rvec out(static_cast<size_t>(target.n), 0.0);
  for (int j = 0; j < target.n; ++j) {
    const double x = tau * target.node(j);
    if (std::abs(x) > g.L - 2.0 * g.h) continue;
    const double s = (x + g.L) / g.h;
    const long long j0 = static_cast<long long>(std::floor(s));
    const double f = s - static_cast<double>(j0);
    const double w[4] = {-f * (f - 1.0) * (f - 2.0) / 6.0, (f * f - 1.0) * (f - 2.0) / 2.0,
                         -f * (f + 1.0) * (f - 2.0) / 2.0, f * (f * f - 1.0) / 6.0};
    double acc = 0.0;
    for (int k = -1; k <= 2; ++k) acc += w[k + 1] * dens[static_cast<size_t>(j0 + k)];
    out[static_cast<size_t>(j)] = std::max(0.0, amp * acc);
  }
  return Density(target, std::move(out));
}

EnergyReport modified_energy_report(const WaveField& v_state, const TauTrajectory& traj,
                                    double lambda, const StrangParams& params) {
  require_valid(v_state, "modified_energy_report");
  EnergyReport r;
  r.mass = v_state.mass();
  if (!(r.mass > 1e-12)) throw std::domain_error("modified_energy_report: degenerate mass");
  const Grid1D& g = v_state.grid;
  const double tau = traj.tau(v_state.t);
  const cvec dv = spectral_derivative(v_state.u, g, 1);
  const double dvac = params.delta_vac_rel * max_abs_sq(v_state.u);

  double grad_sq = 0.0, ln_part = 0.0, y2_part = 0.0, ln_pos = 0.0, ln_neg = 0.0, ln_abs = 0.0;
  for (int j = 0; j < g.n; ++j) {
    grad_sq += std::norm(dv[j]);
    const double y = g.node(j);
    const double r2 = std::norm(v_state.u[j]);
    y2_part += y * y * r2;
    if (r2 >= dvac && r2 > 0.0) {
      const double l = r2 * std::log(r2);
      ln_part += l;
      ln_abs += std::abs(l);
      if (r2 > 1.0)
        ln_pos += l;
      else
        ln_neg -= l;
    }
  }
  const double h = g.h;
  grad_sq *= h;
  ln_part *= h;
  ln_abs *= h;
  y2_part *= h;
  ln_pos *= h;
  ln_neg *= h;

  const double e2 = v_state.eps * v_state.eps;
  r.mod_kinetic = 0.5 * e2 / (tau * tau) * grad_sq;
  r.mod_entropy = ln_part + y2_part;
  r.mod_energy = r.mod_kinetic + lambda * r.mod_entropy;
  r.mod_plus = r.mod_kinetic + lambda * ln_pos + lambda * y2_part;
  r.mod_minus = lambda * ln_neg;
  r.tilde_energy = y2_part + ln_abs + e2 / (tau * tau) * grad_sq;
  return r;
}

MomentDiagnostics moment_identities(const std::vector<std::pair<double, Density>>& v_trace,
                                    const TauTrajectory& traj, double eps, const WaveField& u_in) {
  if (v_trace.size() < 3) throw std::invalid_argument("moment_identities: need at least 3 trace times");
  MomentDiagnostics d;
  const double gamma_sq_mass = std::sqrt(kPi);
  const double y2_gamma_sq = 0.5 * std::sqrt(kPi);

  double i2_scale = 0.0;
  for (const auto& [t, rho] : v_trace) {
    const double taut = traj.tau(t);
    const double taud = traj.taudot(t);
    d.times.push_back(t);
    d.i2_tilde.push_back(taut * rho.moment1());
    d.second_moment_dev.push_back(std::abs(rho.moment2() - y2_gamma_sq));
    d.envelope.push_back((taud + 1.0) / (taud * taud));
    i2_scale = std::max(i2_scale, std::abs(d.i2_tilde.back()));
  }

  for (size_t k = 0; k + 2 < d.times.size(); ++k) {
    const double dt1 = d.times[k + 1] - d.times[k];
    const double dt2 = d.times[k + 2] - d.times[k + 1];
    if (std::abs(dt1 - dt2) > 1e-9 * dt1) continue;
    const double dd = d.i2_tilde[k + 2] - 2.0 * d.i2_tilde[k + 1] + d.i2_tilde[k];
    d.max_second_difference = std::max(d.max_second_difference, std::abs(dd) / std::max(i2_scale, 1e-300));
  }

  // Least-squares slope of i2_tilde(t), against the exact affine law.
  const size_t n = d.times.size();
  double st = 0.0, si = 0.0, stt = 0.0, sti = 0.0;
  for (size_t k = 0; k < n; ++k) {
    st += d.times[k];
    si += d.i2_tilde[k];
    stt += d.times[k] * d.times[k];
    sti += d.times[k] * d.i2_tilde[k];
  }
  const double den = static_cast<double>(n) * stt - st * st;
  d.slope = den != 0.0 ? (static_cast<double>(n) * sti - st * si) / den : 0.0;

  const cvec du = spectral_derivative(u_in.u, u_in.grid, 1);
  double i10 = 0.0;
  for (int j = 0; j < u_in.grid.n; ++j) i10 += (std::conj(u_in.u[j]) * du[j]).imag();
  i10 *= eps * u_in.grid.h;
  const double m2 = u_in.mass() * u_in.mass();
  d.slope_predicted = i10 * gamma_sq_mass / m2;

  double c = 0.0;
  for (size_t k = 0; k < n; ++k) c = std::max(c, d.second_moment_dev[k] / d.envelope[k]);
  d.fitted_envelope_const = c;
  return d;
}

SobolevReport sobolev_growth(const std::vector<std::pair<double, WaveField>>& u_trace, double eps,
                             double lambda, const WaveField& u_in, const TauTrajectory& traj) {
  if (u_trace.size() < 2 || u_trace.back().first < 10.0 * u_trace.front().first * (1.0 - 1e-12))
    throw std::invalid_argument("sobolev_growth: trace must span at least one decade in t");
  SobolevReport r;
  const double m2 = u_in.mass() * u_in.mass();
  for (const auto& [t, f] : u_trace) {
    const cvec du = spectral_derivative(f.u, f.grid, 1);
    double g2 = 0.0;
    for (const cplx& z : du) g2 += std::norm(z);
    g2 *= f.grid.h * eps * eps;
    r.times.push_back(t);
    r.eps2_gradnorm_sq.push_back(g2);
    r.ratio.push_back(g2 / (2.0 * lambda * m2 * std::log(traj.tau(t))));
  }
  return r;
}

}  // namespace logdisp
