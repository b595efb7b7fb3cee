#include "logdisp/scaling_ode.hpp"

#include <cmath>
#include <stdexcept>

namespace logdisp {

namespace {

struct State {
  double tau, w;
};

inline State rhs(double lam2sig, const State& y) { return {y.w, lam2sig / y.tau}; }

inline State axpy(const State& y, double a, const State& d) { return {y.tau + a * d.tau, y.w + a * d.w}; }

}  // namespace

TauTrajectory solve_tau_ode(double lambda, double sigma0, double omega0, double t_max, double dt,
                            std::size_t max_stored) {
  if (!(lambda > 0.0) || !(sigma0 > 0.0)) throw std::invalid_argument("solve_tau: lambda, sigma0 must be positive");
  if (!(dt > 0.0) || !(dt <= t_max)) throw std::invalid_argument("solve_tau: need 0 < dt <= t_max");

  TauTrajectory traj;
  traj.lambda_ = lambda;
  traj.sigma0_ = sigma0;
  traj.omega0_ = omega0;
  traj.dt_ = dt;

  const long long n_steps = static_cast<long long>(std::ceil(t_max / dt - 1e-12));
  const long long stride = std::max<long long>(1, (n_steps + static_cast<long long>(max_stored) - 1) /
                                                      static_cast<long long>(max_stored));
  traj.samples_.reserve(static_cast<std::size_t>(n_steps / stride + 2));

  const double lam2sig = 2.0 * lambda * sigma0;
  const double e0 = 0.5 * omega0 * omega0;
  State y{1.0, omega0};
  double drift = 0.0;
  traj.samples_.push_back({0.0, y.tau, y.w});
  for (long long i = 0; i < n_steps; ++i) {
    const State k1 = rhs(lam2sig, y);
    const State k2 = rhs(lam2sig, axpy(y, 0.5 * dt, k1));
    const State k3 = rhs(lam2sig, axpy(y, 0.5 * dt, k2));
    const State k4 = rhs(lam2sig, axpy(y, dt, k3));
    y.tau += dt / 6.0 * (k1.tau + 2.0 * k2.tau + 2.0 * k3.tau + k4.tau);
    y.w += dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    const double e = 0.5 * y.w * y.w - lam2sig * std::log(y.tau);
    drift = std::max(drift, std::abs(e - e0));
    if ((i + 1) % stride == 0 || i + 1 == n_steps)
      traj.samples_.push_back({dt * static_cast<double>(i + 1), y.tau, y.w});
  }
  traj.t_max_ = traj.samples_.back().t;
  traj.drift_ = drift;
  if (drift > 1e-8)
    throw std::runtime_error("solve_tau: first-integral drift " + std::to_string(drift) +
                             " exceeds 1e-8, step size too large");
  return traj;
}

TauTrajectory solve_tau(double lambda, double t_max, double dt, std::size_t max_stored) {
  return solve_tau_ode(lambda, 1.0, 0.0, t_max, dt, max_stored);
}

TauTrajectory solve_tau0(double lambda, double sigma0, double omega0, double t_max, double dt,
                         std::size_t max_stored) {
  return solve_tau_ode(lambda, sigma0, omega0, t_max, dt, max_stored);
}

std::pair<TauTrajectory::Sample, TauTrajectory::Sample> TauTrajectory::bracket(double t) const {
  if (t < 0.0 || t > t_max_ * (1.0 + 1e-12)) throw std::domain_error("TauTrajectory: t out of range");
  // Samples are uniformly spaced except possibly the last.
  const double step = samples_.size() > 1 ? samples_[1].t - samples_[0].t : t_max_;
  std::size_t i = static_cast<std::size_t>(t / step);
  if (i >= samples_.size() - 1) i = samples_.size() - 2;
  while (i > 0 && samples_[i].t > t) --i;
  while (i + 2 < samples_.size() && samples_[i + 1].t < t) ++i;
  return {samples_[i], samples_[i + 1]};
}

double TauTrajectory::tau(double t) const {
  if (t <= 0.0) return samples_.front().tau;
  if (t >= t_max_) {
    if (t > t_max_ * (1.0 + 1e-12)) throw std::domain_error("TauTrajectory: t out of range");
    return samples_.back().tau;
  }
  auto [a, b] = bracket(t);
  const double dt = b.t - a.t;
  const double s = (t - a.t) / dt;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * a.tau + h10 * dt * a.taudot + h01 * b.tau + h11 * dt * b.taudot;
}

double TauTrajectory::taudot(double t) const {
  if (t <= 0.0) return samples_.front().taudot;
  if (t >= t_max_) {
    if (t > t_max_ * (1.0 + 1e-12)) throw std::domain_error("TauTrajectory: t out of range");
    return samples_.back().taudot;
  }
  auto [a, b] = bracket(t);
  const double dt = b.t - a.t;
  const double s = (t - a.t) / dt;
  // Hermite interpolation of taudot using tauddot = 2 lambda sigma0 / tau.
  const double lam2sig = 2.0 * lambda_ * sigma0_;
  const double da = lam2sig / a.tau;
  const double db = lam2sig / b.tau;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * a.taudot + h10 * dt * da + h01 * b.taudot + h11 * dt * db;
}

double TauTrajectory::s_of_t(double t) const {
  if (!(t >= dt_)) throw std::domain_error("s_of_t: t below t_min (taudot vanishes at 0)");
  const double td = taudot(t);
  if (!(td > 0.0)) throw std::domain_error("s_of_t: taudot not positive");
  return 0.5 * std::log(td);
}

double TauTrajectory::t_of_s(double s) const {
  double lo = dt_, hi = t_max_;
  if (s < s_of_t(lo) - 1e-12 || s > s_of_t(hi) + 1e-12) throw std::domain_error("t_of_s: s out of attained range");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (s_of_t(mid) < s)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

double TauTrajectory::tau_in_s_check(double s) const {
  const double t = t_of_s(s);
  const double closed = std::exp(std::exp(4.0 * s) / (4.0 * lambda_));
  return std::abs(tau(t) - closed) / closed;
}

std::pair<double, double> tau_asymptotic(double lambda, double t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("tau_asymptotic: lambda must be positive");
  if (!(t > std::exp(1.0))) throw std::domain_error("tau_asymptotic: requires t > e");
  const double r = 2.0 * std::sqrt(lambda * std::log(t));
  return {t * r, r};
}

}  // namespace logdisp
