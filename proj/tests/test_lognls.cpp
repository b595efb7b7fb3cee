#include <doctest.h>

#include <cmath>

#include "logdisp/lognls.hpp"
#include "logdisp/metrics.hpp"

using namespace logdisp;

namespace {

double field_l2_diff(const WaveField& a, const WaveField& b) {
  double acc = 0.0;
  for (size_t j = 0; j < a.u.size(); ++j) acc += std::norm(a.u[j] - b.u[j]);
  return std::sqrt(a.grid.h * acc);
}

}  // namespace

TEST_SUITE("lognls") {

TEST_CASE("lambda = 0 step is the exact free propagator") {
  const Grid1D g = make_grid(8.0, 64);
  const double eps = 0.5, dt = 0.37;
  const double k = 4.0 * kPi / g.L;
  WaveField u;
  u.grid = g;
  u.eps = eps;
  u.u.resize(static_cast<size_t>(g.n));
  for (int j = 0; j < g.n; ++j) u.u[static_cast<size_t>(j)] = std::exp(cplx(0.0, k * g.node(j)));
  const WaveField next = strang_step(u, 0.0, dt);
  const cplx phase = std::exp(cplx(0.0, -0.5 * eps * k * k * dt));
  double worst = 0.0;
  for (int j = 0; j < g.n; ++j)
    worst = std::max(worst, std::abs(next.u[static_cast<size_t>(j)] - phase * u.u[static_cast<size_t>(j)]));
  CHECK(worst < 1e-13);
}

TEST_CASE("mass is conserved over 1000 steps") {
  const Grid1D g = make_grid(16.0, 256);
  WaveField u = wkb_initial_data(g, 0.5, {1.0, 1.0, 0.0, 0.0});
  const double m0 = u.mass();
  strang_run(u, 1.0, 1e-3, 1000);
  CHECK(std::abs(u.mass() - m0) / m0 < 1e-12);
  CHECK(u.t == doctest::Approx(1.0));
}

TEST_CASE("fused run equals repeated single steps") {
  const Grid1D g = make_grid(16.0, 128);
  WaveField a = wkb_initial_data(g, 0.5, {1.0, 1.0, 0.0, 0.5});
  WaveField b = a;
  strang_run(a, 1.0, 1e-2, 25);
  for (int i = 0; i < 25; ++i) b = strang_step(b, 1.0, 1e-2);
  CHECK(field_l2_diff(a, b) < 1e-12);
}

TEST_CASE("oracle reproduces the WKB data at t = 0") {
  const Grid1D g = make_grid(16.0, 256);
  const WkbGaussian d{0.7, 1.3, 0.4, -0.6};
  const WaveField o = ansatz_to_field(ansatz_initial_state(d), g, 0.5);
  const WaveField w = wkb_initial_data(g, 0.5, d);
  CHECK(field_l2_diff(o, w) < 1e-13);
}

TEST_CASE("oracle PDE residual is small") {
  const Grid1D g = make_grid(16.0, 512);
  CHECK(ansatz_pde_residual({1.0, 1.0, 0.0, 0.0}, 0.3, 1.0, 0.7, g) <= 1e-7);
}

TEST_CASE("oracle modulus approaches the classical profile as eps -> 0") {
  const Grid1D g = make_grid(16.0, 512);
  const WkbGaussian d{1.0, 1.0, 0.0, 0.3};
  const double lambda = 1.0, t = 1.0;
  const TauTrajectory tau0 = solve_tau0(lambda, d.sigma0, d.omega0, 2.0, 1e-3);
  auto classical_gap = [&](double eps) {
    const WaveField u = gaussian_ansatz_oracle(d, eps, lambda, t, g);
    const double tt = tau0.tau(t);
    double worst = 0.0;
    for (int j = 0; j < g.n; ++j) {
      const double x = g.node(j);
      const double rho = d.rho_star / tt * std::exp(-d.sigma0 * (x - d.p0 * t) * (x - d.p0 * t) / (tt * tt));
      worst = std::max(worst, std::abs(std::norm(u.u[static_cast<size_t>(j)]) - rho));
    }
    return worst;
  };
  const double g1 = classical_gap(0.4), g2 = classical_gap(0.2), g3 = classical_gap(0.1);
  CHECK(g2 < g1);
  CHECK(g3 < g2);
  CHECK(g3 < 0.02);
}

TEST_CASE("solver matches the oracle at second order") {
  const Grid1D g = make_grid(16.0, 512);
  const WkbGaussian d{1.0, 1.0, 0.0, 0.0};
  const double eps = 0.5, lambda = 1.0;
  const WaveField ref = gaussian_ansatz_oracle(d, eps, lambda, 1.0, g, 1e-5);
  WaveField u = wkb_initial_data(g, eps, d);
  strang_run(u, lambda, 4e-4, 2500);
  const double err = field_l2_diff(u, ref);
  CHECK(err < 1e-6);
  WaveField u2 = wkb_initial_data(g, eps, d);
  strang_run(u2, lambda, 2e-4, 5000);
  const double ratio = err / field_l2_diff(u2, ref);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("conserved quantities of reference states") {
  const Grid1D g = make_grid(16.0, 256);
  WaveField u;
  u.grid = g;
  u.eps = 1.0;
  u.u.resize(static_cast<size_t>(g.n));
  // real gamma: zero angular momentum
  for (int j = 0; j < g.n; ++j) u.u[static_cast<size_t>(j)] = std::exp(-0.5 * g.node(j) * g.node(j));
  EnergyReport r = conserved_quantities(u, 1.0);
  CHECK(std::abs(r.angular_momentum) < 1e-12);
  // gamma e^{ikx}: J = eps k ||gamma||^2
  const double k = 6.0 * kPi / g.L;
  for (int j = 0; j < g.n; ++j)
    u.u[static_cast<size_t>(j)] = std::exp(-0.5 * g.node(j) * g.node(j)) * std::exp(cplx(0.0, k * g.node(j)));
  r = conserved_quantities(u, 1.0);
  CHECK(r.angular_momentum == doctest::Approx(k * std::sqrt(kPi)).epsilon(1e-10));
  // normalized gaussian: E = 1/4 - 1/2 - ln(pi)/2 (closed Gaussian integrals)
  const double c = std::pow(kPi, -0.25);
  for (int j = 0; j < g.n; ++j) u.u[static_cast<size_t>(j)] = c * std::exp(-0.5 * g.node(j) * g.node(j));
  r = conserved_quantities(u, 1.0);
  CHECK(r.energy == doctest::Approx(-0.25 - 0.5 * std::log(kPi)).epsilon(1e-10));
  // degenerate mass rejected
  u.u.assign(static_cast<size_t>(g.n), 0.0);
  CHECK_THROWS(conserved_quantities(u, 1.0));
}

TEST_CASE("rescaling is unitary and reduces to the identity at t = 0") {
  const Grid1D g = make_grid(24.0, 1024);
  const TauTrajectory traj = solve_tau(1.0, 3.0, 1e-3);
  WaveField u = wkb_initial_data(g, 0.5, {0.8, 1.2, 0.0, 0.2});
  const WaveField v0 = rescale_to_v(u, traj);
  const double ratio = std::pow(kPi, 0.25) / u.mass();
  double worst = 0.0;
  for (int j = 0; j < g.n; ++j)
    worst = std::max(worst, std::abs(v0.u[static_cast<size_t>(j)] - ratio * u.u[static_cast<size_t>(j)]));
  CHECK(worst < 1e-10);
  strang_run(u, 1.0, 1e-3, 1500);
  const WaveField v = rescale_to_v(u, traj);
  CHECK(v.mass() == doctest::Approx(std::pow(kPi, 0.25)).epsilon(1e-10));
}

TEST_CASE("rescaled oracle density approaches the Gaussian profile") {
  const Grid1D g = make_grid(32.0, 2048);
  const TauTrajectory traj = solve_tau(1.0, 2.5, 1e-3);
  const WkbGaussian d{1.0, 2.0, 0.0, 0.0};
  rvec gref = gamma_sq(g);
  auto l1_gap = [&](double t) {
    const WaveField v = rescale_to_v(gaussian_ansatz_oracle(d, 0.5, 1.0, t, g), traj);
    const double norm = std::sqrt(kPi) / (v.mass() * v.mass());
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j)
      acc += std::abs(std::norm(v.u[static_cast<size_t>(j)]) * norm * std::sqrt(kPi) -
                      gref[static_cast<size_t>(j)]);
    return g.h * acc;
  };
  CHECK(l1_gap(2.0) < l1_gap(0.0));
}

TEST_CASE("rescale rejects fields touching the boundary") {
  const Grid1D g = make_grid(4.0, 128);  // too small for the gaussian tails
  const TauTrajectory traj = solve_tau(1.0, 1.0, 1e-3);
  WaveField u = wkb_initial_data(g, 0.5, {1.0, 0.2, 0.0, 0.0});
  CHECK_THROWS(rescale_to_v(u, traj));
}

TEST_CASE("modified energy report identities") {
  const Grid1D g = make_grid(16.0, 512);
  const TauTrajectory traj = solve_tau(1.0, 3.0, 1e-3);
  // |v|^2 = gamma^2: relative entropy vanishes
  WaveField v;
  v.grid = g;
  v.eps = 0.5;
  v.t = 0.0;
  v.u.resize(static_cast<size_t>(g.n));
  for (int j = 0; j < g.n; ++j) v.u[static_cast<size_t>(j)] = std::exp(-0.5 * g.node(j) * g.node(j));
  EnergyReport r = modified_energy_report(v, traj, 1.0);
  CHECK(std::abs(r.mod_entropy) < 1e-12);
  CHECK(r.mod_energy == doctest::Approx(r.mod_plus - r.mod_minus).epsilon(1e-12));
  CHECK(r.tilde_energy >= r.mod_plus);

  // dilated gaussian |v|^2 = a e^{-(y/b)^2}: closed-form entropy
  const double a = 0.9, b = 1.25;
  for (int j = 0; j < g.n; ++j) {
    const double y = g.node(j);
    v.u[static_cast<size_t>(j)] = std::sqrt(a) * std::exp(-0.5 * y * y / (b * b));
  }
  r = modified_energy_report(v, traj, 1.0);
  const double closed = a * std::sqrt(kPi) * b * (std::log(a) + 0.5 * (b * b - 1.0));
  CHECK(r.mod_entropy == doctest::Approx(closed).epsilon(1e-10));
  // Csiszar-Kullback lower bound
  double l1 = 0.0;
  for (int j = 0; j < g.n; ++j)
    l1 += std::abs(std::norm(v.u[static_cast<size_t>(j)]) - std::exp(-g.node(j) * g.node(j)));
  l1 *= g.h;
  CHECK(r.mod_entropy >= l1 * l1 / (2.0 * std::sqrt(kPi)));
}

TEST_CASE("modified energy decay law on the oracle run") {
  const Grid1D g = make_grid(16.0, 512);
  const TauTrajectory traj = solve_tau(1.0, 3.0, 1e-3);
  const WkbGaussian d{1.0, 1.0, 0.0, 0.0};
  const double eps = 0.5, lambda = 1.0, t0 = 1.0;
  auto mod_energy = [&](double t) {
    return modified_energy_report(rescale_to_v(gaussian_ansatz_oracle(d, eps, lambda, t, g), traj),
                                  traj, lambda);
  };
  const EnergyReport e0 = mod_energy(t0);
  const double rhs = -2.0 * traj.taudot(t0) / traj.tau(t0) * e0.mod_kinetic;
  auto fd = [&](double dd) {
    return (mod_energy(t0 + dd).mod_energy - mod_energy(t0 - dd).mod_energy) / (2.0 * dd);
  };
  const double err1 = std::abs(fd(2e-3) - rhs);
  const double err2 = std::abs(fd(1e-3) - rhs);
  CHECK(err2 < 1e-5 * std::abs(rhs));
  CHECK(err1 / err2 > 3.0);  // O(dt^2) finite difference
  CHECK(err1 / err2 < 6.0);
}

TEST_CASE("discrete continuity equation on the oracle run") {
  const Grid1D g = make_grid(16.0, 512);
  const TauTrajectory traj = solve_tau(1.0, 3.0, 1e-3);
  const WkbGaussian d{1.0, 1.0, 0.0, 0.0};
  const double eps = 0.5, lambda = 1.0, t0 = 1.0;
  auto vfield = [&](double t) {
    return rescale_to_v(gaussian_ansatz_oracle(d, eps, lambda, t, g), traj);
  };
  auto residual = [&](double dd) {
    const WaveField vm = vfield(t0 - dd), v0 = vfield(t0), vp = vfield(t0 + dd);
    const cvec dv = spectral_derivative(v0.u, g, 1);
    rvec flux(static_cast<size_t>(g.n));
    for (int j = 0; j < g.n; ++j)
      flux[static_cast<size_t>(j)] = eps * (std::conj(v0.u[static_cast<size_t>(j)]) * dv[static_cast<size_t>(j)]).imag();
    const rvec divj = spectral_derivative(flux, g, 1);
    const double tau = traj.tau(t0);
    double worst = 0.0;
    for (int j = 0; j < g.n; ++j) {
      const double rho_t = (std::norm(vp.u[static_cast<size_t>(j)]) - std::norm(vm.u[static_cast<size_t>(j)])) / (2.0 * dd);
      worst = std::max(worst, std::abs(rho_t + divj[static_cast<size_t>(j)] / (tau * tau)));
    }
    return worst;
  };
  const double r1 = residual(2e-3), r2 = residual(1e-3);
  CHECK(r2 < 1e-4);
  CHECK(r1 / r2 > 3.0);
  CHECK(r1 / r2 < 6.0);
}

TEST_CASE("first moment of v is exactly affine in the splitting") {
  const Grid1D g = make_grid(32.0, 1024);
  const double eps = 0.5, lambda = 1.0;
  const TauTrajectory traj = solve_tau(lambda, 2.0, 1e-3);
  WaveField u = wkb_initial_data(g, eps, {1.0, 1.0, 0.0, 1.0});
  const WaveField u_in = u;
  std::vector<std::pair<double, Density>> trace;
  for (int blk = 0; blk < 5; ++blk) {
    strang_run(u, lambda, 1e-3, 200);
    const WaveField v = rescale_to_v(u, traj);
    rvec dens(static_cast<size_t>(g.n));
    for (int j = 0; j < g.n; ++j) dens[static_cast<size_t>(j)] = std::norm(v.u[static_cast<size_t>(j)]);
    trace.emplace_back(u.t, Density(g, dens));
  }
  const MomentDiagnostics md = moment_identities(trace, traj, eps, u_in);
  CHECK(md.max_second_difference <= 1e-6);
  CHECK(md.slope == doctest::Approx(md.slope_predicted).epsilon(1e-8));
  // p0 = 1, unit gaussian: slope = I_{1,0} ||gamma^2|| / ||u_in||^2 = sqrt(pi)
  CHECK(md.slope_predicted == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
}

TEST_CASE("even data keeps the first moment at zero") {
  const Grid1D g = make_grid(16.0, 512);
  const double eps = 0.5, lambda = 1.0;
  const TauTrajectory traj = solve_tau(lambda, 1.0, 1e-3);
  WaveField u = wkb_initial_data(g, eps, {1.0, 1.0, 0.0, 0.0});
  const WaveField u_in = u;
  std::vector<std::pair<double, Density>> trace;
  for (int blk = 0; blk < 3; ++blk) {
    strang_run(u, lambda, 1e-3, 100);
    const WaveField v = rescale_to_v(u, traj);
    rvec dens(static_cast<size_t>(g.n));
    for (int j = 0; j < g.n; ++j) dens[static_cast<size_t>(j)] = std::norm(v.u[static_cast<size_t>(j)]);
    trace.emplace_back(u.t, Density(g, dens));
  }
  const MomentDiagnostics md = moment_identities(trace, traj, eps, u_in);
  for (double v : md.i2_tilde) CHECK(std::abs(v) < 1e-10);
  CHECK_THROWS(moment_identities({trace[0], trace[1]}, traj, eps, u_in));
}

TEST_CASE("sobolev growth rejects short traces") {
  const Grid1D g = make_grid(16.0, 256);
  const TauTrajectory traj = solve_tau(1.0, 10.0, 1e-3);
  const WaveField u_in = wkb_initial_data(g, 1.0, {1.0, 1.0, 0.0, 0.0});
  std::vector<std::pair<double, WaveField>> trace = {{1.0, u_in}, {5.0, u_in}};
  CHECK_THROWS(sobolev_growth(trace, 1.0, 1.0, u_in, traj));
}

TEST_CASE("tensor product of two 1D solutions solves the 2D equation") {
  // u2(t, x, y) = u_a(t, x) u_b(t, y) satisfies
  // i eps u2_t + (eps^2/2)(u2_xx + u2_yy) = lambda u2 ln|u2|^2 because the
  // logarithm splits; checked through a finite-difference residual on a small
  // 2D lattice of oracle evaluations.
  const double eps = 0.4, lambda = 1.0, t = 0.6;
  const WkbGaussian da{1.0, 1.0, 0.2, 0.3};
  const WkbGaussian db{0.8, 1.5, 0.0, -0.4};
  auto u2 = [&](double tt, double x, double y) {
    const AnsatzState sa = ansatz_evolve(ansatz_initial_state(da), eps, lambda, tt, 1e-4);
    const AnsatzState sb = ansatz_evolve(ansatz_initial_state(db), eps, lambda, tt, 1e-4);
    auto field = [&](const AnsatzState& st, double xx) {
      const double X = xx - st.q;
      return std::exp(-st.a * X * X + st.c) *
             std::exp(cplx(0.0, (st.b * X * X + st.p * X + st.phi) / eps));
    };
    return field(sa, x) * field(sb, y);
  };
  auto residual = [&](double step) {
    double worst = 0.0;
    for (double x : {-0.7, 0.4}) {
      for (double y : {-0.3, 0.8}) {
        const cplx ut = (u2(t + step, x, y) - u2(t - step, x, y)) / (2.0 * step);
        const cplx uxx = (u2(t, x + step, y) - 2.0 * u2(t, x, y) + u2(t, x - step, y)) / (step * step);
        const cplx uyy = (u2(t, x, y + step) - 2.0 * u2(t, x, y) + u2(t, x, y - step)) / (step * step);
        const cplx u0 = u2(t, x, y);
        const cplx res = cplx(0.0, eps) * ut + 0.5 * eps * eps * (uxx + uyy) -
                         lambda * u0 * std::log(std::norm(u0));
        worst = std::max(worst, std::abs(res));
      }
    }
    return worst;
  };
  const double r1 = residual(1.0 / 64.0), r2 = residual(1.0 / 128.0);
  CHECK(r2 < 2e-3);
  CHECK(r1 / r2 > 3.5);
  CHECK(r1 / r2 < 4.5);
}

TEST_CASE("input validation of the stepper") {
  const Grid1D g = make_grid(16.0, 128);
  WaveField u = wkb_initial_data(g, 0.5, {1.0, 1.0, 0.0, 0.0});
  CHECK_THROWS(strang_step(u, 1.0, 0.0));
  CHECK_THROWS(strang_step(u, 1.0, -1e-3));
  CHECK_THROWS(wkb_initial_data(g, 0.5, {-1.0, 1.0, 0.0, 0.0}));
  CHECK_THROWS(wkb_initial_data(g, 0.5, {1.0, 0.0, 0.0, 0.0}));
  u.eps = -1.0;
  CHECK_THROWS(strang_step(u, 1.0, 1e-3));
}

TEST_CASE("negative control: corrupted vacuum floor breaks the entropy") {
  const Grid1D g = make_grid(16.0, 512);
  const TauTrajectory traj = solve_tau(1.0, 1.0, 1e-3);
  WaveField v;
  v.grid = g;
  v.eps = 0.5;
  v.t = 0.0;
  v.u.resize(static_cast<size_t>(g.n));
  for (int j = 0; j < g.n; ++j) v.u[static_cast<size_t>(j)] = std::exp(-0.5 * g.node(j) * g.node(j));
  StrangParams corrupted;
  corrupted.delta_vac_rel = 1.0;
  const EnergyReport bad = modified_energy_report(v, traj, 1.0, corrupted);
  // with the floor at max|u|^2 the relative entropy of gamma^2 is no longer 0
  CHECK(std::abs(bad.mod_entropy) > 0.1);
}

}  // TEST_SUITE
