#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "selfprop/model.hpp"
#include "selfprop/operators.hpp"
#include "test_oracles.hpp"

using namespace selfprop;

TEST(Potentials, DoubleWellExamples) {
  EXPECT_DOUBLE_EQ(double_well(0.5), 0.03125);
  EXPECT_DOUBLE_EQ(double_well_deriv(0.25), 0.09375);
  EXPECT_EQ(double_well_deriv(0.0), 0.0);
  EXPECT_EQ(double_well_deriv(0.5), 0.0);
  EXPECT_EQ(double_well_deriv(1.0), 0.0);
  EXPECT_EQ(double_well(0.0), 0.0);
  EXPECT_EQ(double_well(1.0), 0.0);
}

TEST(Potentials, ShapeFunctionExamples) {
  EXPECT_NEAR(shape_fn(1.0), 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(shape_fn(0.5), 1.0 / 12.0, 1e-16);
  EXPECT_DOUBLE_EQ(shape_fn_deriv(0.5), 0.25);
  EXPECT_DOUBLE_EQ(std::sqrt(2.0 * double_well(0.5)), 0.25);
}

TEST(Potentials, DerivativesMatchCentralDifferences) {
  for (double phi = -0.2; phi <= 1.2; phi += 0.05) {
    const double d = 1e-6;
    EXPECT_NEAR(double_well_deriv(phi), (double_well(phi + d) - double_well(phi - d)) / (2 * d), 1e-8);
    EXPECT_NEAR(shape_fn_deriv(phi), (shape_fn(phi + d) - shape_fn(phi - d)) / (2 * d), 1e-8);
  }
}

TEST(Potentials, IdentitiesOnUnitInterval) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double phi = d(rng);
    EXPECT_NEAR(shape_fn_deriv(phi), std::sqrt(2.0 * double_well(phi)), 1e-12);
    EXPECT_NEAR(shape_fn(phi) + shape_fn(1.0 - phi), 1.0 / 6.0, 1e-12);
    EXPECT_NEAR(double_well(phi), double_well(1.0 - phi), 1e-15);
    EXPECT_GE(shape_fn(phi), 0.0);
    EXPECT_LE(shape_fn(phi), 1.0 / 6.0 + 1e-16);
  }
}

TEST(SurfaceTension, Examples) {
  ModelParams p;
  p.gamma0 = 0.1;
  p.u1 = 2.0;
  p.m = 2;
  EXPECT_DOUBLE_EQ(surface_tension(0.0, p), 1.1);
  EXPECT_DOUBLE_EQ(surface_tension(0.0, p), p.max_gamma());
  EXPECT_DOUBLE_EQ(surface_tension(2.0, p), 0.6);
  EXPECT_NEAR(surface_tension(2e6, p), 0.1, 1e-11);
  EXPECT_THROW(surface_tension(-1e-3, p), std::invalid_argument);
}

TEST(SurfaceTension, MonotoneAndBounded) {
  ModelParams p;
  p.gamma0 = 0.3;
  p.u1 = 0.7;
  p.m = 3;
  double prev = surface_tension(0.0, p);
  for (double u = 0.01; u < 20.0; u += 0.01) {
    const double g = surface_tension(u, p);
    EXPECT_LE(g, prev);
    EXPECT_GT(g, p.gamma0);
    EXPECT_LE(g, 1.0 + p.gamma0);
    prev = g;
  }
}

TEST(SurfaceTension, ConstantVariant) {
  ModelParams p;
  p.variant = Variant::kConstGamma;
  p.gamma_const = 2.5;
  EXPECT_EQ(surface_tension(0.0, p), 2.5);
  EXPECT_EQ(surface_tension(100.0, p), 2.5);
  EXPECT_EQ(p.max_gamma(), 2.5);
}

TEST(SurfaceTension, ClampsRoundoffNegatives) {
  ModelParams p;
  EXPECT_EQ(detail::surface_tension_unchecked(-1e-17, p), surface_tension(0.0, p));
}

TEST(ModelParams, ValidationRejectsNonPositive) {
  ModelParams p;
  EXPECT_NO_THROW(p.validate());
  auto bad = [](auto mutate) {
    ModelParams q;
    mutate(q);
    return q;
  };
  EXPECT_THROW(bad([](ModelParams& q) { q.epsilon = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](ModelParams& q) { q.epsilon = -0.01; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](ModelParams& q) { q.tau = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](ModelParams& q) { q.sigma = -1.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](ModelParams& q) { q.alpha = -1.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](ModelParams& q) { q.k = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](ModelParams& q) { q.gamma0 = -0.1; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](ModelParams& q) { q.u1 = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](ModelParams& q) { q.m = 0; }).validate(), std::invalid_argument);
}

TEST(Nonlocal, StildeExamples) {
  const Grid g = make_uniform_grid(2, 16);
  const ScalarField phi0(g, 0.0), ones(g, 1.0);
  EXPECT_EQ(stilde(phi0, integrate_pointwise(phi0, shape_fn), 5.0), 0.0);
  EXPECT_NEAR(stilde(ones, integrate_pointwise(phi0, shape_fn), 6.0), 1.0, 1e-14);
}

TEST(Nonlocal, SOldExamples) {
  const Grid g = make_uniform_grid(2, 16);
  const ScalarField zero(g, 0.0), ones(g, 1.0), half(g, 0.5);
  EXPECT_EQ(s_old(zero, integrate(zero), 3.0), 0.0);
  EXPECT_NEAR(s_old(ones, integrate(zero), 1.0), 1.0, 1e-14);
  EXPECT_NEAR(s_old(half, integrate(zero), 2.0), 1.0, 1e-14);
}

TEST(Nonlocal, BoundsHoldForRandomAdmissibleFields) {
  const Grid g = make_uniform_grid(2, 8);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  const double alpha = 10.0;
  for (int trial = 0; trial < 10000; ++trial) {
    ScalarField phi(g), phi0(g);
    const double a = d(rng), b = d(rng);  // vary the fill fraction so extremes are reached
    for (std::size_t c = 0; c < phi.size(); ++c) {
      phi[c] = std::pow(d(rng), a * 4.0);
      phi0[c] = std::pow(d(rng), b * 4.0);
    }
    EXPECT_LE(std::abs(stilde(phi, integrate_pointwise(phi0, shape_fn), alpha)), alpha / 3.0);
    EXPECT_LE(std::abs(s_old(phi, integrate(phi0), alpha)), alpha);
  }
  EXPECT_NEAR(10.0 / 3.0, 3.333, 1e-3);
}

TEST(MakeState, FreezesDiscreteReferenceMass) {
  const Grid g = make_uniform_grid(2, 32);
  ModelParams p;
  p.alpha = 50.0;
  const ScalarField phi = ScalarField::from_function(g, [](const Vec3& x) { return 0.5 + 0.3 * std::cos(6.2 * x[1]); });
  const SimState s = make_state(phi, ScalarField(g, 0.5), p);
  EXPECT_EQ(s.ref_mass, integrate_pointwise(phi, shape_fn));
  EXPECT_EQ(nonlocal_term(s.phi, s.ref_mass, p), 0.0);
  ModelParams q = p;
  q.variant = Variant::kSOld;
  EXPECT_EQ(make_state(phi, ScalarField(g, 0.5), q).ref_mass, integrate(phi));
}

TEST(RhsPhi, PurePhaseIsStationary) {
  const Grid g = make_uniform_grid(2, 16);
  ModelParams p;
  p.epsilon = 0.05;
  const ScalarField u = ScalarField::from_function(g, [](const Vec3& x) { return 0.2 + x[0]; });
  const SimState s = make_state(ScalarField(g, 1.0), u, p);
  const ScalarField r = rhs_phi(s, p);
  for (std::size_t c = 0; c < r.size(); ++c) EXPECT_EQ(r[c], 0.0);
}

TEST(RhsPhi, HalfPhaseUnderConstantTension) {
  const Grid g = make_uniform_grid(2, 16);
  ModelParams p;
  p.epsilon = 0.04;
  p.variant = Variant::kConstGamma;
  p.gamma_const = 1.3;
  const SimState s = make_state(ScalarField(g, 0.5), ScalarField(g, 0.7), p);
  const ScalarField r = rhs_phi(s, p);
  const double expected = p.gamma_const / (4.0 * p.epsilon);
  const double independent = testing_oracles::phase_rate(0.5, 0.0, 1.3, 0.0, 0.04, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(independent, expected);
  for (std::size_t c = 0; c < r.size(); ++c) EXPECT_NEAR(r[c], expected, 1e-13);
}

TEST(RhsPhi, MatchesIndependentScalarFormula) {
  const Grid g = make_grid({16, 12}, {1.0, 0.75});
  ModelParams p;
  p.epsilon = 0.03;
  p.tau = 1.7;
  p.sigma = 0.8;
  p.alpha = 20.0;
  p.gamma0 = 0.2;
  p.u1 = 0.6;
  p.m = 3;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.05, 0.95);
  ScalarField phi(g), u(g);
  for (std::size_t c = 0; c < phi.size(); ++c) {
    phi[c] = d(rng);
    u[c] = d(rng);
  }
  SimState s = make_state(phi, u, p);
  s.stilde = 0.37;  // pretend the mass has drifted
  const ScalarField r = rhs_phi(s, p);
  const ScalarField lap = laplacian(phi);
  for (std::size_t c = 0; c < r.size(); ++c) {
    const double gam = 1.0 / (1.0 + std::pow(u[c] / 0.6, 3)) + 0.2;
    const double ref = testing_oracles::phase_rate(phi[c], lap[c], gam, 0.37, 0.03, 1.7, 0.8);
    EXPECT_NEAR(r[c], ref, 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST(RhsPhi, StandingWaveResidualIsDiscretizationError) {
  // The tanh profile solves eps^2 q'' = W'(q) / 2 exactly, so the residual
  // must come from the stencil alone and shrink like h^2.
  auto residual = [](int n) {
    const Grid g = make_grid({n, 8}, {1.0, 1.0 / n * 8});
    ModelParams p;
    p.epsilon = 0.02;
    p.variant = Variant::kConstGamma;
    p.gamma_const = 0.0;
    const double w = 2.0 * std::numbers::sqrt2 * p.epsilon;
    const ScalarField phi = ScalarField::from_function(g, [&](const Vec3& x) {
      return 0.5 * (std::tanh((x[0] - 0.25) / w) - std::tanh((x[0] - 0.75) / w));
    });
    const SimState s = make_state(phi, ScalarField(g, 0.5), p);
    const ScalarField r = rhs_phi(s, p);
    // The two-front profile is not periodic, so skip the seam at x = 0.
    double m = 0.0;
    for (std::size_t c = 0; c < r.size(); ++c) {
      const double x = g.cell_center(c)[0];
      if (std::min(std::abs(x - 0.25), std::abs(x - 0.75)) <= 0.1) m = std::max(m, std::abs(r[c]));
    }
    return m;
  };
  const double rc = residual(256), rf = residual(512);
  // Scale of a single reaction term: max |W'| / (2 eps^2).
  const double scale = 0.0481125 / (2.0 * 0.02 * 0.02);
  EXPECT_LE(rc, 0.1 * scale);
  EXPECT_GT(rc / rf, 3.5);
  EXPECT_LT(rc / rf, 4.5);
}

TEST(RhsPhi, NonFiniteInputReportsCell) {
  const Grid g = make_uniform_grid(2, 8);
  ModelParams p;
  SimState s = make_state(ScalarField(g, 0.5), ScalarField(g, 0.5), p);
  s.phi[g.index(0, 0)] = NAN;  // first cell in scan order, so it is reported first
  try {
    rhs_phi(s, p);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("(0, 0, 0)"), std::string::npos) << e.what();
  }
}
