#ifndef LOGDISP_KIE_HPP
#define LOGDISP_KIE_HPP

#include <vector>

#include "logdisp/grid.hpp"
#include "logdisp/scaling_ode.hpp"

namespace logdisp {

/// Parameters of the explicit Gaussian-Gaussian family of the kinetic
/// isothermal Euler system. c20 = 0 encodes the monokinetic degenerate family.
struct GaussianGaussianParams {
  double lambda = 1.0;
  double c10 = 1.0;
  double c20 = 1.0;
  double c11 = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;

  double c_tilde() const { return c10 * c20; }
  bool monokinetic() const { return c20 == 0.0; }
};

/// Dense solution of c1'' = 2 lambda / c1 + C~^2 / c1^3 with closed-form
/// companions c2 = C~/c1, b1 = B1 t + B0, b2 = (c1'/c1)(x - b1) + B1.
class KieTrajectory {
 public:
  struct Sample {
    double t, c1, c1dot;
  };

  const GaussianGaussianParams& params() const { return params_; }
  double t_max() const { return t_max_; }
  double first_integral_drift() const { return drift_; }
  const std::vector<Sample>& samples() const { return samples_; }

  double c1(double t) const;
  double c1dot(double t) const;
  double c2(double t) const { return params_.c_tilde() / c1(t); }
  double b1(double t) const { return params_.b1 * t + params_.b0; }
  double b2(double t, double x) const { return c1dot(t) / c1(t) * (x - b1(t)) + params_.b1; }

  friend KieTrajectory solve_c1(const GaussianGaussianParams& p, double t_max, double dt,
                                std::size_t max_stored);

 private:
  GaussianGaussianParams params_;
  double t_max_ = 0.0, dt_ = 0.0, drift_ = 0.0;
  std::vector<Sample> samples_;
};

KieTrajectory solve_c1(const GaussianGaussianParams& p, double t_max, double dt,
                       std::size_t max_stored = (std::size_t{1} << 21));

/// Phase-space value f(t,x,xi) of the Gaussian-Gaussian solution;
/// rejects monokinetic parameters.
double gg_eval(const KieTrajectory& traj, double t, double x, double xi);

/// Spatial density rho(t,x) (mass one).
double gg_density(const KieTrajectory& traj, double t, double x);

struct ResidualLattice {
  double x_lo, x_hi, xi_lo, xi_hi;
  int nx = 33, nxi = 33;
};

/// Max-norm residual of f_t + xi f_x - lambda (d/dx ln rho) f_xi over the
/// lattice; all derivatives by centered differences of width `step` scaled per
/// variable, d/dx ln rho analytic (affine). Second order in `step`.
double vlasov_residual(const KieTrajectory& traj, double t, const ResidualLattice& lat, double step);

struct KieConservationReport {
  std::vector<double> times;
  std::vector<double> mass;     // iint f (closed form = 1)
  std::vector<double> energy;   // 1/2 iint xi^2 f + lambda int rho ln rho
  double max_mass_drift = 0.0;
  double max_energy_drift = 0.0;          // relative to |energy(0)|
  double max_moment_ode_residual = 0.0;   // finite-difference residual of both moment ODEs
  double max_quadrature_mismatch = 0.0;   // closed-form moments vs 2D lattice quadrature
};

KieConservationReport kie_conservation_report(const KieTrajectory& traj,
                                              const std::vector<double>& t_values);

struct RescaledProfile {
  Density rho_tilde;      // sqrt(pi) tau rho(t, tau y), mass-matched to gamma^2
  double l1_gap = 0.0;    // || rho_tilde - gamma^2 ||_L1
  double envelope = 0.0;  // sqrt(ln ln t / ln t)
  double ck_bound_sq = 0.0;  // 2 pi [ (1 - (tau/c1)^2)/2 + ln(c1/tau) + b1^2/c1^2 ]
};

RescaledProfile gg_rescaled_profile(const KieTrajectory& traj, const TauTrajectory& tau_traj,
                                    double t, const Grid1D& g);

/// Gaussian-monokinetic family (rho, v) of the isothermal Euler system.
struct MonokineticFamily {
  double lambda, rho_star, sigma0, omega0, p0;
  TauTrajectory tau0;

  double rho(double t, double x) const;
  double v(double t, double x) const;
};

MonokineticFamily monokinetic_family(double lambda, double rho_star, double sigma0, double omega0,
                                     double p0, double t_max, double dt = 1e-3);

/// Max-norm residual of the isothermal Euler system for the monokinetic family
/// (continuity + momentum), centered differences of width `step`.
double isothermal_euler_residual(const MonokineticFamily& fam, double t, double x_lo, double x_hi,
                                 int nx, double step);

}  // namespace logdisp

#endif
