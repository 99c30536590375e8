#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "selfprop/diagnostics.hpp"
#include "selfprop/model.hpp"
#include "test_oracles.hpp"

using namespace selfprop;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Two flat interfaces at x = 0.25 and x = 0.75, phase 1 in between.
ScalarField flat_stripe(const Grid& g, double eps) {
  const double w = 2.0 * kSqrt2 * eps;
  return ScalarField::from_function(g, [&](const Vec3& x) { return 0.5 * (1.0 + std::tanh((0.25 - std::abs(x[0] - 0.5)) / w)); });
}

}  // namespace

TEST(EnergyReport, PurePhase) {
  const Grid g = make_grid({16, 16}, {1.0, 2.0});
  ModelParams p;
  const SimState s = make_state(ScalarField(g, 1.0), ScalarField(g, 0.5), p);
  const EnergyReport r = energy_report(s, p);
  EXPECT_EQ(r.E_s, 0.0);
  EXPECT_EQ(r.xi, 0.0);
  EXPECT_NEAR(r.mass_G, 2.0 / 6.0, 1e-14);
  EXPECT_EQ(r.phi_min, 1.0);
  EXPECT_EQ(r.u_min, 0.5);
}

TEST(EnergyReport, SurfaceConstantOfFlatProfile) {
  // c0 = int_0^1 sqrt(W) ds by direct quadrature.
  const double c0 = testing_oracles::trapezoid([](double s) { return std::sqrt(double_well(s)); }, 0.0, 1.0, 200000);
  EXPECT_NEAR(c0, 1.0 / (6.0 * kSqrt2), 1e-10);
  EXPECT_NEAR(c0, 0.117851, 1e-6);

  const Grid g = make_grid({256, 32}, {1.0, 0.125});
  ModelParams p;
  p.epsilon = 0.02;
  const SimState s = make_state(flat_stripe(g, p.epsilon), ScalarField(g, 0.5), p);
  const EnergyReport r = energy_report(s, p);
  const double per_length = r.mu_total / (2.0 * g.lengths[1]);
  EXPECT_NEAR(per_length / c0, 1.0, 0.02);
  EXPECT_LE(r.xi / r.mu_total, 0.02);
}

TEST(EnergyReport, StructuralInvariants) {
  const Grid g = make_uniform_grid(2, 32);
  ModelParams p;
  p.epsilon = 0.05;
  p.alpha = 7.0;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField phi(g);
    for (std::size_t c = 0; c < phi.size(); ++c) phi[c] = d(rng);
    SimState s = make_state(ScalarField(g, 0.3), ScalarField(g, 0.5), p);
    s.phi = phi;
    s.stilde = nonlocal_term(s.phi, s.ref_mass, p);
    const EnergyReport r = energy_report(s, p);
    EXPECT_GE(r.E_s, 0.0);
    EXPECT_GE(r.E_p, 0.0);
    EXPECT_GE(r.xi, 0.0);
    EXPECT_GE(r.mu_total, r.xi);
    EXPECT_EQ(r.E, r.E_s + r.E_p);
    EXPECT_NEAR(r.E_p, r.stilde * r.stilde / (2.0 * p.alpha), 1e-12);
  }
}

TEST(EnergyReport, GradientFlowConsistency) {
  const Grid g = make_uniform_grid(2, 48);
  ModelParams p;
  p.epsilon = 0.05;
  p.tau = 1.3;
  p.sigma = 0.9;
  p.alpha = 40.0;
  p.variant = Variant::kConstGamma;
  p.gamma_const = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.1, 0.9);
  SimState s = make_state(flat_stripe(g, 0.05), ScalarField(g, 0.5), p);
  for (std::size_t c = 0; c < s.phi.size(); ++c) s.phi[c] = std::clamp(s.phi[c] + 0.1 * (d(rng) - 0.5), 0.01, 0.99);
  s.stilde = nonlocal_term(s.phi, s.ref_mass, p);
  const ScalarField rhs = rhs_phi(s, p);
  const double delta = 1e-6;
  std::uniform_int_distribution<std::size_t> pick(0, s.phi.size() - 1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t c = pick(rng);
    SimState plus = s, minus = s;
    plus.phi[c] += delta;
    minus.phi[c] -= delta;
    const double dE = (energy_report(plus, p).E - energy_report(minus, p).E) / (2.0 * delta);
    const double grad = dE / g.cell_volume();  // L2 gradient
    const double expected = -p.epsilon * p.tau * rhs[c];
    EXPECT_NEAR(grad, expected, 1e-3 * std::abs(expected)) << "cell " << c;
  }
}

TEST(Envelope, ExamplesAndInitialPass) {
  const Grid g = make_uniform_grid(2, 16);
  ScalarField phi0(g, 0.4), u0(g, 0.25);
  phi0[3] = 0.9;
  phi0[4] = 0.05;
  ModelParams p;
  p.epsilon = 0.1;
  p.gamma0 = 0.5;  // M_gamma = 1.5
  p.alpha = 10.0;
  const EnvelopeParams env = make_envelope(phi0, u0, p);
  EXPECT_NEAR(env.D1, 0.1, 1e-15);
  EXPECT_NEAR(env.D2, 100.0 * (0.5 + 0.1 * (1.5 + 10.0 / 3.0)), 1e-10);
  EXPECT_NEAR(env.D2, 98.33, 0.01);
  EXPECT_EQ(env.D3, 0.05);
  EXPECT_EQ(env.D4, 0.25);
  const SimState s = make_state(phi0, u0, p);
  const EnvelopeResult r = envelope_check(s, env);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.upper_margin, 0.0, 1e-15);
  EXPECT_NEAR(r.lower_margin, 0.0, 1e-15);
  EXPECT_NEAR(r.u_margin, 0.0, 1e-15);
}

TEST(Envelope, DetectsViolation) {
  const Grid g = make_uniform_grid(2, 16);
  ModelParams p;
  const ScalarField phi0(g, 0.5), u0(g, 0.5);
  const EnvelopeParams env = make_envelope(phi0, u0, p);
  SimState s = make_state(phi0, u0, p);
  s.u[0] = 0.1;  // far below 0.5 e^{-k t} at t = 0
  const EnvelopeResult r = envelope_check(s, env);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.u_margin, -0.4, 1e-15);
}

TEST(VolumeDrift, BoundFormula) {
  ModelParams p;
  p.gamma0 = 0.0;  // M_gamma = 1
  p.alpha = 100.0;
  const double b = volume_drift_bound(0.2, 0.5, p);
  EXPECT_NEAR(b, std::sqrt(0.02 * std::exp(1.0) * 0.2), 1e-15);
  EXPECT_NEAR(b, 0.1043, 1e-4);
  ModelParams q = p;
  q.alpha = 200.0;
  EXPECT_NEAR(b / volume_drift_bound(0.2, 0.5, q), kSqrt2, 1e-12);
  p.alpha = 0.0;
  EXPECT_TRUE(std::isinf(volume_drift_bound(0.2, 0.5, p)));
}

TEST(VolumeDrift, ZeroDriftPasses) {
  const Grid g = make_uniform_grid(2, 16);
  ModelParams p;
  p.alpha = 10.0;
  const SimState s = make_state(ScalarField(g, 0.3), ScalarField(g, 0.5), p);
  const EnergyReport r = energy_report(s, p);
  EXPECT_TRUE(volume_drift_ok(r, r.E, r.mass_G, p));
  EXPECT_TRUE(gronwall_ok(r, r.E, p));
  EXPECT_TRUE(nonlocal_bound_ok(r, g.volume(), p));
}

TEST(MeasureDensity, ZeroPhaseAndConsistency) {
  const Grid g = make_grid({128, 16}, {1.0, 0.125});
  ModelParams p;
  p.epsilon = 0.02;
  const SimState zero = make_state(ScalarField(g, 0.0), ScalarField(g, 0.5), p);
  const ScalarField dz = measure_density(zero, p);
  for (std::size_t c = 0; c < dz.size(); ++c) EXPECT_EQ(dz[c], 0.0);

  const SimState s = make_state(flat_stripe(g, p.epsilon), ScalarField(g, 0.5), p);
  const ScalarField dens = measure_density(s, p);
  EXPECT_GE(dens.min(), 0.0);
  EXPECT_NEAR(integrate(dens), energy_report(s, p).mu_total, 1e-12);
}

TEST(MeasureDensity, ConcentratedNearInterface) {
  const Grid g = make_grid({512, 8}, {1.0, 1.0 / 64});
  ModelParams p;
  p.epsilon = 0.02;
  const SimState s = make_state(flat_stripe(g, p.epsilon), ScalarField(g, 0.5), p);
  const ScalarField dens = measure_density(s, p);
  const double total = integrate(dens);
  double near = 0.0;
  for (std::size_t c = 0; c < dens.size(); ++c) {
    const double x = g.cell_center(c)[0];
    if (std::min(std::abs(x - 0.25), std::abs(x - 0.75)) <= 6.0 * p.epsilon) near += dens[c];
  }
  near *= g.cell_volume();
  EXPECT_GE(near / total, 0.99);
}
