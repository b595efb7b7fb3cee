#include "logdisp/kie.hpp"

#include <cmath>
#include <stdexcept>

namespace logdisp {

namespace {

struct C1State {
  double c1, w;
};

}  // namespace

KieTrajectory solve_c1(const GaussianGaussianParams& p, double t_max, double dt,
                       std::size_t max_stored) {
  if (!(p.lambda > 0.0) || !(p.c10 > 0.0) || p.c20 < 0.0)
    throw std::invalid_argument("solve_c1: need lambda > 0, c10 > 0, c20 >= 0");
  if (!(dt > 0.0) || !(dt <= t_max)) throw std::invalid_argument("solve_c1: need 0 < dt <= t_max");

  KieTrajectory traj;
  traj.params_ = p;
  traj.dt_ = dt;

  const double ct2 = p.c_tilde() * p.c_tilde();
  auto rhs = [&](const C1State& y) { return C1State{y.w, 2.0 * p.lambda / y.c1 + ct2 / (y.c1 * y.c1 * y.c1)}; };
  auto axpy = [](const C1State& y, double a, const C1State& d) {
    return C1State{y.c1 + a * d.c1, y.w + a * d.w};
  };
  auto first_integral = [&](const C1State& y) {
    return 0.5 * y.w * y.w - 2.0 * p.lambda * std::log(y.c1) + 0.5 * ct2 / (y.c1 * y.c1);
  };

  const long long n_steps = static_cast<long long>(std::ceil(t_max / dt - 1e-12));
  const long long stride = std::max<long long>(1, (n_steps + static_cast<long long>(max_stored) - 1) /
                                                      static_cast<long long>(max_stored));
  C1State y{p.c10, p.c11};
  const double e0 = first_integral(y);
  double drift = 0.0;
  traj.samples_.push_back({0.0, y.c1, y.w});
  for (long long i = 0; i < n_steps; ++i) {
    const C1State k1 = rhs(y);
    const C1State k2 = rhs(axpy(y, 0.5 * dt, k1));
    const C1State k3 = rhs(axpy(y, 0.5 * dt, k2));
    const C1State k4 = rhs(axpy(y, dt, k3));
    y.c1 += dt / 6.0 * (k1.c1 + 2.0 * k2.c1 + 2.0 * k3.c1 + k4.c1);
    y.w += dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    drift = std::max(drift, std::abs(first_integral(y) - e0));
    if ((i + 1) % stride == 0 || i + 1 == n_steps)
      traj.samples_.push_back({dt * static_cast<double>(i + 1), y.c1, y.w});
  }
  traj.t_max_ = traj.samples_.back().t;
  traj.drift_ = drift;
  if (drift > 1e-8)
    throw std::runtime_error("solve_c1: first-integral drift " + std::to_string(drift) +
                             " exceeds 1e-8");
  return traj;
}

namespace {

double hermite(double t, double ta, double tb, double ya, double da, double yb, double db) {
  const double dt = tb - ta;
  const double s = (t - ta) / dt;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * ya + h10 * dt * da + h01 * yb + h11 * dt * db;
}

}  // namespace

double KieTrajectory::c1(double t) const {
  if (t <= 0.0) return samples_.front().c1;
  if (t >= t_max_) {
    if (t > t_max_ * (1.0 + 1e-12)) throw std::domain_error("KieTrajectory: t out of range");
    return samples_.back().c1;
  }
  const double step = samples_.size() > 1 ? samples_[1].t - samples_[0].t : t_max_;
  std::size_t i = static_cast<std::size_t>(t / step);
  if (i >= samples_.size() - 1) i = samples_.size() - 2;
  while (i > 0 && samples_[i].t > t) --i;
  while (i + 2 < samples_.size() && samples_[i + 1].t < t) ++i;
  const auto& a = samples_[i];
  const auto& b = samples_[i + 1];
  return hermite(t, a.t, b.t, a.c1, a.c1dot, b.c1, b.c1dot);
}

double KieTrajectory::c1dot(double t) const {
  if (t <= 0.0) return samples_.front().c1dot;
  if (t >= t_max_) {
    if (t > t_max_ * (1.0 + 1e-12)) throw std::domain_error("KieTrajectory: t out of range");
    return samples_.back().c1dot;
  }
  const double step = samples_.size() > 1 ? samples_[1].t - samples_[0].t : t_max_;
  std::size_t i = static_cast<std::size_t>(t / step);
  if (i >= samples_.size() - 1) i = samples_.size() - 2;
  while (i > 0 && samples_[i].t > t) --i;
  while (i + 2 < samples_.size() && samples_[i + 1].t < t) ++i;
  const auto& a = samples_[i];
  const auto& b = samples_[i + 1];
  const double ct2 = params_.c_tilde() * params_.c_tilde();
  const double da = 2.0 * params_.lambda / a.c1 + ct2 / (a.c1 * a.c1 * a.c1);
  const double db = 2.0 * params_.lambda / b.c1 + ct2 / (b.c1 * b.c1 * b.c1);
  return hermite(t, a.t, b.t, a.c1dot, da, b.c1dot, db);
}

double gg_eval(const KieTrajectory& traj, double t, double x, double xi) {
  if (traj.params().monokinetic())
    throw std::domain_error("gg_eval: monokinetic parameters (c20 = 0) have no phase-space density");
  const double c1 = traj.c1(t);
  const double c2 = traj.c2(t);
  const double dx = x - traj.b1(t);
  const double dxi = xi - traj.b2(t, x);
  return std::exp(-dx * dx / (c1 * c1) - dxi * dxi / (c2 * c2)) / (kPi * c1 * c2);
}

double gg_density(const KieTrajectory& traj, double t, double x) {
  const double c1 = traj.c1(t);
  const double dx = x - traj.b1(t);
  return std::exp(-dx * dx / (c1 * c1)) / (std::sqrt(kPi) * c1);
}

double vlasov_residual(const KieTrajectory& traj, double t, const ResidualLattice& lat, double step) {
  if (traj.params().monokinetic())
    throw std::domain_error("vlasov_residual: monokinetic parameters rejected");
  if (!(step > 0.0)) throw std::invalid_argument("vlasov_residual: step must be positive");
  const double lambda = traj.params().lambda;
  double worst = 0.0;
  for (int i = 0; i < lat.nx; ++i) {
    const double x = lat.x_lo + (lat.x_hi - lat.x_lo) * static_cast<double>(i) / (lat.nx - 1);
    for (int j = 0; j < lat.nxi; ++j) {
      const double xi = lat.xi_lo + (lat.xi_hi - lat.xi_lo) * static_cast<double>(j) / (lat.nxi - 1);
      const double ft = (gg_eval(traj, t + step, x, xi) - gg_eval(traj, t - step, x, xi)) / (2.0 * step);
      const double fx = (gg_eval(traj, t, x + step, xi) - gg_eval(traj, t, x - step, xi)) / (2.0 * step);
      const double fxi = (gg_eval(traj, t, x, xi + step) - gg_eval(traj, t, x, xi - step)) / (2.0 * step);
      const double c1 = traj.c1(t);
      const double dlnrho = -2.0 * (x - traj.b1(t)) / (c1 * c1);
      const double res = ft + xi * fx - lambda * dlnrho * fxi;
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

KieConservationReport kie_conservation_report(const KieTrajectory& traj,
                                              const std::vector<double>& t_values) {
  if (traj.params().monokinetic())
    throw std::domain_error("kie_conservation_report: monokinetic parameters rejected");
  const GaussianGaussianParams& p = traj.params();
  KieConservationReport r;

  // Closed Gaussian moments: x ~ N(b1, c1^2/2), xi | x ~ N(b2(x), c2^2/2).
  auto xi2_moment = [&](double t) {
    const double c1d = traj.c1dot(t);
    const double c2 = traj.c2(t);
    return 0.5 * c2 * c2 + 0.5 * c1d * c1d + p.b1 * p.b1;
  };
  auto x2_moment = [&](double t) {
    const double c1 = traj.c1(t);
    const double b1 = traj.b1(t);
    return 0.5 * c1 * c1 + b1 * b1;
  };
  auto xxi_moment = [&](double t) {
    return 0.5 * traj.c1dot(t) * traj.c1(t) + traj.b1(t) * p.b1;
  };
  auto rho_log_moment = [&](double t) {
    const double c1 = traj.c1(t);
    return -std::log(std::sqrt(kPi) * c1) - 0.5;
  };
  auto energy = [&](double t) { return 0.5 * xi2_moment(t) + p.lambda * rho_log_moment(t); };

  double e_ref = 0.0;
  for (size_t k = 0; k < t_values.size(); ++k) {
    const double t = t_values[k];
    r.times.push_back(t);
    r.mass.push_back(1.0);
    r.energy.push_back(energy(t));
    if (k == 0) e_ref = std::abs(r.energy[0]) > 1e-12 ? std::abs(r.energy[0]) : 1.0;
    r.max_energy_drift = std::max(r.max_energy_drift, std::abs(r.energy[k] - r.energy[0]) / e_ref);

    // d/dt iint x^2 f = 2 iint x xi f  and  d/dt iint x xi f = iint xi^2 f + lambda.
    const double dt = 1e-4 * std::max(1.0, t);
    if (t - dt > 0.0 && t + dt <= traj.t_max()) {
      const double lhs1 = (x2_moment(t + dt) - x2_moment(t - dt)) / (2.0 * dt);
      const double rhs1 = 2.0 * xxi_moment(t);
      const double lhs2 = (xxi_moment(t + dt) - xxi_moment(t - dt)) / (2.0 * dt);
      const double rhs2 = xi2_moment(t) + p.lambda;
      const double s1 = std::max(1.0, std::abs(rhs1));
      const double s2 = std::max(1.0, std::abs(rhs2));
      r.max_moment_ode_residual =
          std::max({r.max_moment_ode_residual, std::abs(lhs1 - rhs1) / s1, std::abs(lhs2 - rhs2) / s2});
    }
  }

  // Cross-check the closed forms by 2D lattice quadrature at the first time.
  {
    const double t = t_values.front();
    const double c1 = traj.c1(t), c2 = traj.c2(t), b1 = traj.b1(t);
    const double wx = 7.0 * c1, wxi = 7.0 * (c2 + std::abs(traj.c1dot(t)) + 1.0);
    const int nq = 512;
    double m0 = 0.0, mx2 = 0.0, mxi2 = 0.0, ment = 0.0;
    const double hx = 2.0 * wx / nq, hxi = 2.0 * wxi / nq;
    for (int i = 0; i < nq; ++i) {
      const double x = b1 - wx + hx * (i + 0.5);
      double row0 = 0.0, rowxi2 = 0.0;
      const double bb2 = traj.b2(t, x);
      for (int j = 0; j < nq; ++j) {
        const double xi = bb2 - wxi + hxi * (j + 0.5);
        const double f = gg_eval(traj, t, x, xi);
        row0 += f;
        rowxi2 += xi * xi * f;
      }
      m0 += row0;
      mx2 += x * x * row0;
      mxi2 += rowxi2;
      const double rho = gg_density(traj, t, x);
      if (rho > 0.0) ment += rho * std::log(rho);
    }
    m0 *= hx * hxi;
    mx2 *= hx * hxi;
    mxi2 *= hx * hxi;
    ment *= hx;
    r.max_quadrature_mismatch = std::max({std::abs(m0 - 1.0), std::abs(mx2 - x2_moment(t)),
                                          std::abs(mxi2 - xi2_moment(t)),
                                          std::abs(ment - rho_log_moment(t))});
  }
  return r;
}

RescaledProfile gg_rescaled_profile(const KieTrajectory& traj, const TauTrajectory& tau_traj,
                                    double t, const Grid1D& g) {
  if (t < 2.0) throw std::domain_error("gg_rescaled_profile: requires t >= 2");
  const double tau = tau_traj.tau(t);
  rvec vals(static_cast<size_t>(g.n));
  for (int j = 0; j < g.n; ++j) {
    const double y = g.node(j);
    vals[static_cast<size_t>(j)] = std::sqrt(kPi) * tau * gg_density(traj, t, tau * y);
  }
  RescaledProfile out{Density(g, std::move(vals)), 0.0, 0.0, 0.0};
  double l1 = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double y = g.node(j);
    l1 += std::abs(out.rho_tilde.values()[static_cast<size_t>(j)] - std::exp(-y * y));
  }
  out.l1_gap = g.h * l1;
  out.envelope = std::sqrt(std::log(std::log(t)) / std::log(t));
  const double c1 = traj.c1(t);
  const double b1 = traj.b1(t);
  const double ratio = tau / c1;
  out.ck_bound_sq = 2.0 * kPi * (0.5 * (1.0 - ratio * ratio) + std::log(c1 / tau) + b1 * b1 / (c1 * c1));
  return out;
}

double MonokineticFamily::rho(double t, double x) const {
  const double tt = tau0.tau(t);
  const double d = x - p0 * t;
  return rho_star / tt * std::exp(-sigma0 * d * d / (tt * tt));
}

double MonokineticFamily::v(double t, double x) const {
  const double tt = tau0.tau(t);
  return tau0.taudot(t) / tt * (x - p0 * t) + p0;
}

MonokineticFamily monokinetic_family(double lambda, double rho_star, double sigma0, double omega0,
                                     double p0, double t_max, double dt) {
  if (!(rho_star > 0.0) || !(sigma0 > 0.0))
    throw std::invalid_argument("monokinetic_family: rho_star, sigma0 must be positive");
  return MonokineticFamily{lambda, rho_star, sigma0, omega0, p0,
                           solve_tau0(lambda, sigma0, omega0, t_max, dt)};
}

double isothermal_euler_residual(const MonokineticFamily& fam, double t, double x_lo, double x_hi,
                                 int nx, double step) {
  if (!(step > 0.0) || nx < 2) throw std::invalid_argument("isothermal_euler_residual: bad lattice");
  double worst = 0.0;
  auto rho = [&](double tt, double x) { return fam.rho(tt, x); };
  auto mom = [&](double tt, double x) { return fam.rho(tt, x) * fam.v(tt, x); };
  for (int i = 0; i < nx; ++i) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / (nx - 1);
    const double rho_t = (rho(t + step, x) - rho(t - step, x)) / (2.0 * step);
    const double m_x = (mom(t, x + step) - mom(t, x - step)) / (2.0 * step);
    const double m_t = (mom(t + step, x) - mom(t - step, x)) / (2.0 * step);
    const double flux_x = (mom(t, x + step) * fam.v(t, x + step) - mom(t, x - step) * fam.v(t, x - step)) /
                          (2.0 * step);
    const double rho_x = (rho(t, x + step) - rho(t, x - step)) / (2.0 * step);
    worst = std::max({worst, std::abs(rho_t + m_x), std::abs(m_t + flux_x + fam.lambda * rho_x)});
  }
  return worst;
}

}  // namespace logdisp
