#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "selfprop/oracle.hpp"
#include "test_oracles.hpp"

using namespace selfprop;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

// Radius law with constant surface tension, written out for the 2D case.
auto forced_rate(double gamma_hat, double alpha, double R0) {
  return [=](double R) { return -1.0 / R + kSqrt2 * (gamma_hat - alpha / 6.0 * kPi * (R * R - R0 * R0)); };
}

}  // namespace

TEST(McfRadius, Examples) {
  EXPECT_DOUBLE_EQ(mcf_radius(0.25, 0.01, 2), std::sqrt(0.0425));
  EXPECT_NEAR(mcf_radius(0.25, 0.01, 3), 0.15, 1e-15);
  EXPECT_EQ(mcf_radius(0.25, 0.0, 2), 0.25);
  EXPECT_THROW(mcf_radius(0.25, 0.03125, 2), std::invalid_argument);
  EXPECT_THROW(mcf_radius(0.25, 0.01, 4), std::invalid_argument);
}

TEST(ForcedTrajectory, ReducesToMeanCurvatureFlow) {
  for (int n : {2, 3}) {
    OracleOptions opt;
    opt.dimension = n;
    const OracleTrajectory tr = forced_circle_trajectory(0.3, 0.0, 0.0, 1e-4, 0.02, opt);
    ASSERT_FALSE(tr.extinct);
    EXPECT_EQ(tr.times.back(), 0.02);
    for (std::size_t i = 0; i < tr.times.size(); i += 17) EXPECT_NEAR(tr.radii[i], mcf_radius(0.3, tr.times[i], n), 1e-8);
  }
}

TEST(ForcedTrajectory, CriticalRadiusIsUnstable) {
  // gamma_hat = 2 sqrt(2) balances curvature exactly at R = 1/4.
  const double g = 2.0 * kSqrt2;
  const auto at_rest = forced_circle_trajectory(0.25, g, 0.0, 1e-4, 0.05);
  EXPECT_NEAR(at_rest.radii.back(), 0.25, 1e-12);

  const auto shrink = forced_circle_trajectory(0.2, g, 0.0, 1e-4, 0.05);
  const auto grow = forced_circle_trajectory(0.3, g, 0.0, 1e-4, 0.05);
  for (std::size_t i = 1; i < shrink.radii.size(); ++i) {
    EXPECT_LT(shrink.radii[i], shrink.radii[i - 1]);
    EXPECT_GT(grow.radii[i], grow.radii[i - 1]);
  }
  EXPECT_NEAR(shrink.radii.back(), testing_oracles::rk4(forced_rate(g, 0.0, 0.2), 0.2, 1e-5, 0.05), 1e-9);
  EXPECT_NEAR(grow.radii.back(), testing_oracles::rk4(forced_rate(g, 0.0, 0.3), 0.3, 1e-5, 0.05), 1e-9);
  EXPECT_NEAR(shrink.radii.back(), 0.0327927, 1e-6);
  EXPECT_NEAR(grow.radii.back(), 0.3435042, 1e-6);
}

TEST(ForcedTrajectory, StrongPenaltyLocksRadius) {
  const double g = 2.0 * kSqrt2;
  const auto tr = forced_circle_trajectory(0.2, g, 1e4, 1e-5, 0.02);
  EXPECT_NEAR(tr.radii.back(), testing_oracles::rk4(forced_rate(g, 1e4, 0.2), 0.2, 1e-6, 0.02), 1e-9);
  // Quasi-static balance -1/R + sqrt(2) (g - alpha pi (R^2 - R0^2) / 6) = 0 near R0.
  const double R_eq = 0.2 - (1.0 / 0.2 - kSqrt2 * g) / (kSqrt2 * 1e4 * kPi * 0.2 / 3.0);
  EXPECT_NEAR(tr.radii.back(), R_eq, 2e-5);
  EXPECT_LT(std::abs(tr.radii.back() - 0.2), 1e-3);
}

TEST(ForcedTrajectory, ExtinctionStopsEarly) {
  const auto tr = forced_circle_trajectory(0.1, 0.0, 0.0, 1e-4, 0.1);
  EXPECT_TRUE(tr.extinct);
  EXPECT_LT(tr.times.back(), 0.005);
  EXPECT_THROW(forced_circle_trajectory(0.0, 0.0, 0.0, 1e-4, 0.1), std::invalid_argument);
}

TEST(ForcedTrajectory, FourthOrderWithoutSubdivision) {
  OracleOptions raw;
  raw.local_tolerance = std::numeric_limits<double>::infinity();
  const double g = 2.0 * kSqrt2, T = 0.05;
  const double ref = testing_oracles::rk4(forced_rate(g, 50.0, 0.3), 0.3, 1e-6, T);
  const double e1 = std::abs(forced_circle_trajectory(0.3, g, 50.0, 5e-3, T, raw).radii.back() - ref);
  const double e2 = std::abs(forced_circle_trajectory(0.3, g, 50.0, 2.5e-3, T, raw).radii.back() - ref);
  EXPECT_GE(e1 / e2, 12.0);
  EXPECT_LE(e1 / e2, 20.0);
}

TEST(RadiusAt, Interpolates) {
  OracleTrajectory tr;
  EXPECT_THROW(tr.radius_at(0.0), std::logic_error);
  tr.times = {0.0, 1.0, 2.0};
  tr.radii = {1.0, 3.0, 2.0};
  EXPECT_EQ(tr.radius_at(-1.0), 1.0);
  EXPECT_EQ(tr.radius_at(0.5), 2.0);
  EXPECT_EQ(tr.radius_at(1.5), 2.5);
  EXPECT_EQ(tr.radius_at(9.0), 2.0);
}

TEST(CoupledSolve, ConstantGammaMatchesForced) {
  ModelParams p;
  p.variant = Variant::kConstGamma;
  p.gamma_const = 1.3;
  p.alpha = 200.0;
  const auto coupled = radial_coupled_solve(0.25, [](double) { return 0.5; }, p, 0.75, 0.0025, 1e-4, 0.02);
  const auto forced = forced_circle_trajectory(0.25, 1.3, 200.0, 1e-4, 0.02);
  ASSERT_EQ(coupled.radii.size(), forced.radii.size());
  for (std::size_t i = 0; i < forced.radii.size(); ++i) EXPECT_NEAR(coupled.radii[i], forced.radii[i], 1e-12);
  EXPECT_EQ(coupled.u_at_interface.size(), coupled.radii.size());
}

TEST(CoupledSolve, ArgumentChecks) {
  ModelParams p;
  auto zero = [](double) { return 0.0; };
  EXPECT_THROW(radial_coupled_solve(0.25, zero, p, 0.5, 0.0025, 1e-4, 0.01), std::invalid_argument);
  EXPECT_THROW(radial_coupled_solve(0.25, zero, p, 0.75, 0.01, 1e-4, 0.01), std::invalid_argument);
  EXPECT_THROW(radial_coupled_solve(0.25, zero, p, 0.75, 0.0025, 0.0, 0.01), std::invalid_argument);
}

TEST(CoupledSolve, SteadySurfactantMatchesBessel) {
  // A pinned interface (gamma balances curvature at R0, strong penalty)
  // lets the surfactant relax to the steady radial solution.
  ModelParams p;
  p.variant = Variant::kConstGamma;
  p.gamma_const = 2.0 * kSqrt2;
  p.alpha = 1e4;
  p.k = 4.0;
  OracleOptions opt;
  opt.profile_every = 4000;
  const double r_max = 1.0, dr = 0.0025;
  const auto tr = radial_coupled_solve(0.25, [](double) { return 0.0; }, p, r_max, dr, 1e-3, 4.0, opt);
  EXPECT_NEAR(tr.radii.back(), 0.25, 1e-12);
  ASSERT_FALSE(tr.u_profile.empty());
  const auto& u = tr.u_profile.back();
  EXPECT_EQ(tr.profile_times.back(), 4.0);
  const auto exact = testing_oracles::steady_radial_u(p.k, 0.25, r_max);
  for (double r : {0.05, 0.15, 0.3, 0.5, 0.9}) {
    const std::size_t i = static_cast<std::size_t>(r / dr);
    const double rc = (i + 0.5) * dr;
    EXPECT_NEAR(u[i] / exact(rc), 1.0, 1e-4) << "r = " << rc;
  }
}

TEST(CoupledSolve, LargeDecayRateGivesHalfInteriorValue) {
  // For k R^2 >> 1 the steady profile is 1/k inside, 0 outside, with
  // u(R) close to 1/(2k) up to a curvature correction of order 1/(sqrt(k) R).
  ModelParams p;
  p.variant = Variant::kConstGamma;
  p.gamma_const = 2.0 * kSqrt2;
  p.alpha = 1e4;
  p.k = 400.0;
  const auto tr = radial_coupled_solve(0.25, [](double) { return 0.0; }, p, 0.75, 0.0025, 1e-3, 0.1);
  const double uR = tr.u_at_interface.back();
  EXPECT_NEAR(uR * 2.0 * p.k, 1.0, 1.0 / (std::sqrt(p.k) * 0.25));
  const auto exact = testing_oracles::steady_radial_u(p.k, 0.25, 0.75);
  EXPECT_NEAR(uR / exact(0.25), 1.0, 1e-2);
}

TEST(CoupledSolve, SurfactantStaysNonnegativeAndBounded) {
  ModelParams p;
  p.alpha = 100.0;
  p.k = 2.0;
  OracleOptions opt;
  opt.profile_every = 50;
  const auto tr = radial_coupled_solve(0.25, [](double r) { return r < 0.4 ? 0.0 : 0.8; }, p, 0.75, 0.0025, 1e-4, 0.05, opt);
  for (const auto& prof : tr.u_profile)
    for (double v : prof) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 0.8 + 1e-12);
    }
}

TEST(Propulsion, MovesTowardLowerSurfactant) {
  const Grid g = make_uniform_grid(2, 128);
  ModelParams p;
  p.u1 = 0.5;
  p.m = 4;
  const ScalarField u = ScalarField::from_function(g, [](const Vec3& x) { return 0.5 + 0.3 * std::sin(2.0 * kPi * x[0]); });
  const PropulsionEstimate est = propulsion_velocity(u, {0.5, 0.5}, 0.3, p);
  EXPECT_GT(est.velocity[0], 0.0);
  EXPECT_NEAR(est.velocity[1], 0.0, 1e-12);
  EXPECT_GT(est.two_sided[0], 0.0);
  EXPECT_NEAR(est.two_sided[1], 0.0, 1e-12);

  const PropulsionEstimate still = propulsion_velocity(ScalarField(g, 0.4), {0.5, 0.5}, 0.3, p);
  EXPECT_NEAR(still.velocity[0], 0.0, 1e-13);
  EXPECT_NEAR(still.velocity[1], 0.0, 1e-13);
}
