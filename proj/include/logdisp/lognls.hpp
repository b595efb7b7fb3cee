#ifndef LOGDISP_LOGNLS_HPP
#define LOGDISP_LOGNLS_HPP

#include <utility>
#include <vector>

#include "logdisp/grid.hpp"
#include "logdisp/scaling_ode.hpp"

namespace logdisp {

/// Discretized wavefunction of i eps u_t + (eps^2/2) u_xx = lambda u ln|u|^2.
struct WaveField {
  Grid1D grid;
  double eps = 1.0;
  cvec u;
  double t = 0.0;

  double mass() const;  // L2 norm
};

struct StrangParams {
  /// Vacuum floor for the logarithm, relative to max |u|^2.
  double delta_vac_rel = 1e-30;
};

/// One Strang step: half kinetic (exact Fourier multiplier e^{-i eps k^2 dt/4}),
/// full nonlinear phase rotation u -> u e^{-i (lambda dt/eps) ln(max(|u|^2, dvac))}
/// (modulus-preserving), half kinetic.
WaveField strang_step(const WaveField& state, double lambda, double dt,
                      const StrangParams& params = {});

/// n_steps Strang steps with the interior half-kinetic substeps fused.
void strang_run(WaveField& state, double lambda, double dt, long long n_steps,
                const StrangParams& params = {});

/// WKB Gaussian data u = sqrt(rho_in) e^{i phi_in / eps},
/// rho_in = rho_star e^{-sigma0 x^2}, phi_in = omega0 x^2/2 + p0 x.
struct WkbGaussian {
  double rho_star = 1.0;
  double sigma0 = 1.0;
  double omega0 = 0.0;
  double p0 = 0.0;
};

WaveField wkb_initial_data(const Grid1D& g, double eps, const WkbGaussian& d);

/// Closed Gaussian-ansatz reduction of the equation:
///   u = exp(-a (x-q)^2 + c + i [ b (x-q)^2 + p (x-q) + phi ] / eps)
/// with  a' = -4 a b,  b' = 2 eps^2 a^2 - 2 b^2 + 2 lambda a,  q' = p,  p' = 0,
///       c' = -b,      phi' = p^2/2 - eps^2 a - 2 lambda c.
/// For Gaussian WKB data the ansatz solves the PDE exactly (ln of a Gaussian is
/// quadratic), so this is an oracle for the splitting solver.
struct AnsatzState {
  double a, b, q, p, c, phi;
  double t = 0.0;

  double mass_sq() const;                     // ||u||_L2^2
  double eps2_gradnorm_sq(double eps) const;  // eps^2 ||grad u||_L2^2
};

AnsatzState ansatz_initial_state(const WkbGaussian& d);
AnsatzState ansatz_evolve(AnsatzState s, double eps, double lambda, double t_end,
                          double dt = 1e-5);
WaveField ansatz_to_field(const AnsatzState& s, const Grid1D& g, double eps);

WaveField gaussian_ansatz_oracle(const WkbGaussian& d, double eps, double lambda, double t,
                                 const Grid1D& g, double ode_dt = 1e-5);

/// Discrete L2 residual of i eps u_t + (eps^2/2) u_xx - lambda u ln|u|^2
/// evaluated on the oracle with a centered time difference of width dt_fd.
double ansatz_pde_residual(const WkbGaussian& d, double eps, double lambda, double t,
                           const Grid1D& g, double dt_fd = 1e-4);

/// Conserved and modified functionals. Fields not filled by a given call are NaN.
struct EnergyReport {
  double mass = 0.0;
  // Conserved quantities of u.
  double angular_momentum = 0.0;
  double energy = 0.0;
  double kinetic = 0.0;
  double entropy = 0.0;
  // Modified (rescaled) functionals of v.
  double mod_energy = 0.0;
  double mod_kinetic = 0.0;
  double mod_entropy = 0.0;
  double mod_plus = 0.0;
  double mod_minus = 0.0;
  double tilde_energy = 0.0;
};

EnergyReport conserved_quantities(const WaveField& state, double lambda,
                                  const StrangParams& params = {});

/// Invert the rescaling: v(t,y) = tau^{1/2} (||gamma||/||u||) u(t, tau y)
/// e^{-i taudot tau y^2 / (2 eps)}, dilation by spectral interpolation.
WaveField rescale_to_v(const WaveField& state, const TauTrajectory& traj);

EnergyReport modified_energy_report(const WaveField& v_state, const TauTrajectory& traj,
                                    double lambda, const StrangParams& params = {});

/// |v(t, .)|^2 on `target` without forming the complex field: samples
/// tau ||gamma||^2/||u||^2 |u(t, tau y)|^2 by cubic interpolation of the
/// density (adequate because |u|^2 is smooth on the scale tau >> h).
Density rescaled_density(const WaveField& state, const TauTrajectory& traj, const Grid1D& target);

struct MomentDiagnostics {
  std::vector<double> times;
  std::vector<double> i2_tilde;        // tau(t) int y |v|^2 dy
  double max_second_difference = 0.0;  // scaled by max |i2_tilde|
  double slope = 0.0;                  // linear fit of i2_tilde
  double slope_predicted = 0.0;        // I_{1,0} ||gamma^2||_L1 / ||u_in||^2
  std::vector<double> second_moment_dev;  // | int y^2 |v|^2 - int y^2 gamma^2 |
  std::vector<double> envelope;           // (taudot + 1) / taudot^2
  double fitted_envelope_const = 0.0;
};

MomentDiagnostics moment_identities(const std::vector<std::pair<double, Density>>& v_trace,
                                    const TauTrajectory& traj, double eps,
                                    const WaveField& u_in);

struct SobolevReport {
  std::vector<double> times;
  std::vector<double> eps2_gradnorm_sq;
  std::vector<double> ratio;  // against 2 lambda d ||u_in||^2 ln tau(t)
};

SobolevReport sobolev_growth(const std::vector<std::pair<double, WaveField>>& u_trace,
                             double eps, double lambda, const WaveField& u_in,
                             const TauTrajectory& traj);

}  // namespace logdisp

#endif
