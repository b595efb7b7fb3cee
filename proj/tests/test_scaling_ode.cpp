#include <doctest.h>

#include <cmath>

#include "logdisp/scaling_ode.hpp"

using namespace logdisp;

TEST_SUITE("scaling_ode") {

TEST_CASE("initial conditions and first integral") {
  const TauTrajectory traj = solve_tau(1.0, 20.0, 1e-3);
  CHECK(traj.samples().front().tau == 1.0);
  CHECK(traj.samples().front().taudot == 0.0);
  CHECK(traj.first_integral_drift() <= 1e-8);
  // taudot^2 = 4 lambda ln tau at every stored sample
  double worst = 0.0;
  for (const auto& s : traj.samples())
    worst = std::max(worst, std::abs(0.5 * s.taudot * s.taudot - 2.0 * std::log(s.tau)));
  CHECK(worst <= 1e-8);
  // tau strictly increasing, taudot >= 0
  for (size_t k = 1; k < traj.samples().size(); ++k) {
    CHECK(traj.samples()[k].tau > traj.samples()[k - 1].tau);
    CHECK(traj.samples()[k].taudot >= 0.0);
  }
}

TEST_CASE("reference value at t = 10") {
  // Frozen from a dt = 1e-6 RK4 oracle, Richardson-extrapolated.
  const TauTrajectory traj = solve_tau(1.0, 10.0, 1e-3);
  CHECK(traj.tau(10.0) == doctest::Approx(29.706705359585556).epsilon(1e-11));
  CHECK(traj.taudot(10.0) == doctest::Approx(3.6831360496237603).epsilon(1e-11));
}

TEST_CASE("interpolation between samples") {
  const TauTrajectory traj = solve_tau(2.0, 5.0, 1e-3);
  const TauTrajectory fine = solve_tau(2.0, 5.0, 2.5e-4);
  for (double t : {0.77731, 2.31141, 4.99911})
    CHECK(traj.tau(t) == doctest::Approx(fine.tau(t)).epsilon(1e-10));
}

TEST_CASE("step-size too large is rejected") { CHECK_THROWS(solve_tau(1.0, 20.0, 0.1)); }

TEST_CASE("asymptotic form at t = 1e6") {
  auto [ta, tda] = tau_asymptotic(1.0, 1e6);
  CHECK(tda * tda == doctest::Approx(4.0 * std::log(1e6)).epsilon(1e-14));
  CHECK(ta == doctest::Approx(2e6 * std::sqrt(std::log(1e6))).epsilon(1e-14));
  CHECK_THROWS(tau_asymptotic(1.0, 2.0));
  // Extended-horizon oracle comparison (coarse step keeps the run cheap; the
  // first-integral gate still certifies it).
  const TauTrajectory traj = solve_tau(1.0, 1e6, 0.02);
  const double ratio = traj.tau(1e6) / ta;
  CHECK(ratio > 0.8);
  CHECK(ratio < 1.2);
}

TEST_CASE("s and t are inverse and match the closed form") {
  const TauTrajectory traj = solve_tau(1.0, 30.0, 1e-3);
  CHECK(traj.s_of_t(5.0) == doctest::Approx(0.577271991224008).epsilon(1e-9));
  for (double t : {0.5, 2.0, 10.0, 25.0})
    CHECK(traj.t_of_s(traj.s_of_t(t)) == doctest::Approx(t).epsilon(1e-9));
  // taudot(t(s)) = e^{2s}: s = 0 corresponds to taudot = 1, s = 0.6 to e^1.2
  CHECK(traj.taudot(traj.t_of_s(0.0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(traj.taudot(traj.t_of_s(0.6)) == doctest::Approx(std::exp(1.2)).epsilon(1e-9));
  // closed form tau(s) = exp(e^{4s}/(4 lambda)); s = 0 gives e^{1/4}
  CHECK(traj.tau(traj.t_of_s(0.0)) == doctest::Approx(std::exp(0.25)).epsilon(1e-7));
  for (double s : {-0.5, 0.0, 0.4, 0.6}) CHECK(traj.tau_in_s_check(s) <= 1e-6);
  // the deep-negative-s end of the attained range approaches tau = 1
  CHECK(traj.tau(traj.t_of_s(-3.0)) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS(traj.s_of_t(0.0));
  CHECK_THROWS((void)traj.t_of_s(3.0));
}

TEST_CASE("closed form residual for lambda = 2") {
  const TauTrajectory traj = solve_tau(2.0, 30.0, 1e-3);
  CHECK(traj.tau_in_s_check(0.5) <= 1e-6);
}

TEST_CASE("solve_tau0 generalization") {
  // sigma0 = 1, omega0 = 0 coincides with solve_tau
  const TauTrajectory a = solve_tau(1.5, 5.0, 1e-3);
  const TauTrajectory b = solve_tau0(1.5, 1.0, 0.0, 5.0, 1e-3);
  CHECK(a.tau(5.0) == doctest::Approx(b.tau(5.0)).epsilon(1e-14));
  // first integral taudot0^2/2 - omega0^2/2 = 2 lambda sigma0 ln tau0
  const TauTrajectory c = solve_tau0(1.0, 2.0, 1.0, 3.0, 1e-3);
  double worst = 0.0;
  for (const auto& s : c.samples())
    worst = std::max(worst,
                     std::abs(0.5 * s.taudot * s.taudot - 0.5 - 4.0 * std::log(s.tau)));
  CHECK(worst <= 1e-8);
  // frozen fine-step RK4 oracle value at t = 1
  CHECK(c.tau(1.0) == doctest::Approx(3.371593311575038).epsilon(1e-10));
  CHECK(c.taudot(1.0) == doctest::Approx(3.2746119469460556).epsilon(1e-10));
}

TEST_CASE("argument validation") {
  CHECK_THROWS(solve_tau(-1.0, 5.0, 1e-3));
  CHECK_THROWS(solve_tau(1.0, 5.0, 0.0));
  CHECK_THROWS(solve_tau(1.0, 5.0, 6.0));
  CHECK_THROWS(solve_tau0(1.0, -2.0, 0.0, 5.0, 1e-3));
}

}  // TEST_SUITE
