#ifndef LOGDISP_SCALING_ODE_HPP
#define LOGDISP_SCALING_ODE_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace logdisp {

/// Dense RK4 solution of tau'' = 2 lambda sigma0 / tau with cubic Hermite
/// interpolation between stored samples. Immutable after construction.
///
/// The first integral taudot^2/2 - omega0^2/2 - 2 lambda sigma0 ln tau is
/// checked a posteriori over the whole run; construction fails if it drifts
/// beyond 1e-8.
class TauTrajectory {
 public:
  struct Sample {
    double t, tau, taudot;
  };

  double lambda() const { return lambda_; }
  double sigma0() const { return sigma0_; }
  double t_max() const { return t_max_; }
  double first_integral_drift() const { return drift_; }
  const std::vector<Sample>& samples() const { return samples_; }

  double tau(double t) const;
  double taudot(double t) const;

  /// s = (1/2) ln taudot(t); strictly increasing, rejects t <= t_min.
  double s_of_t(double t) const;
  /// Inverse of s_of_t on the attained range [s(t_min), s(t_max)].
  double t_of_s(double s) const;
  /// Relative residual of tau(t(s)) against the closed form exp(e^{4s}/(4 lambda)).
  /// Only meaningful for sigma0 = 1 trajectories started from rest.
  double tau_in_s_check(double s) const;

  /// Smallest time with a usable derivative for the s-variable (= first step).
  double t_min() const { return dt_; }

  friend TauTrajectory solve_tau_ode(double lambda, double sigma0, double omega0, double t_max,
                                     double dt, std::size_t max_stored);

 private:
  double lambda_ = 0.0, sigma0_ = 1.0, omega0_ = 0.0;
  double t_max_ = 0.0, dt_ = 0.0, drift_ = 0.0;
  std::vector<Sample> samples_;

  std::pair<Sample, Sample> bracket(double t) const;
};

/// tau'' = 2 lambda / tau, tau(0) = 1, taudot(0) = 0 (fixed-step RK4).
TauTrajectory solve_tau(double lambda, double t_max, double dt,
                        std::size_t max_stored = (std::size_t{1} << 21));

/// tau0'' = 2 lambda sigma0 / tau0, tau0(0) = 1, taudot0(0) = omega0.
TauTrajectory solve_tau0(double lambda, double sigma0, double omega0, double t_max, double dt,
                         std::size_t max_stored = (std::size_t{1} << 21));

/// Large-time asymptotics (2 t sqrt(lambda ln t), 2 sqrt(lambda ln t));
/// rejects t <= e.
std::pair<double, double> tau_asymptotic(double lambda, double t);

}  // namespace logdisp

#endif
