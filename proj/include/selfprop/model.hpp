#pragma once

// Phase-field / surfactant model: potentials, surface tension, nonlocal
// volume terms and the right-hand side of the phi equation
//
//   eps^2 tau phi_t = eps^2 sigma^2 lap(phi) - W'(phi)/2 - eps G'(phi) (-gamma(u) + S)
//   u_t             = lap(u) - k u + phi
//
// where S is either alpha (int G(phi) - int G(phi_0))  (Variant::kStilde, the
// gradient-flow form) or alpha (int phi - int phi_0)  (Variant::kSOld).

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

#include "selfprop/errors.hpp"
#include "selfprop/grid.hpp"
#include "selfprop/operators.hpp"

namespace selfprop {

enum class Variant {
  kStilde,      ///< nonlocal term on int G(phi); gamma(u) from the surfactant
  kSOld,        ///< nonlocal term on int phi; gamma(u) from the surfactant
  kConstGamma,  ///< nonlocal term on int G(phi); gamma fixed to a constant
};

struct ModelParams {
  double epsilon = 0.02;
  double tau = 1.0;
  double sigma = 1.0;
  double alpha = 0.0;
  double k = 1.0;
  double gamma0 = 0.1;
  double u1 = 1.0;
  int m = 2;
  Variant variant = Variant::kStilde;
  double gamma_const = 0.0;  ///< used by Variant::kConstGamma

  /// sup over u >= 0 of gamma(u).
  double max_gamma() const { return variant == Variant::kConstGamma ? gamma_const : 1.0 + gamma0; }

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(std::string("ModelParams: ") + what);
    };
    require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
    require(tau > 0.0, "tau must be positive");
    require(sigma > 0.0, "sigma must be positive");
    require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be nonnegative");
    require(k > 0.0, "k must be positive");
    require(gamma0 >= 0.0, "gamma0 must be nonnegative");
    require(u1 > 0.0, "u1 must be positive");
    require(m >= 1, "m must be a positive integer");
    require(variant != Variant::kConstGamma || (gamma_const >= 0.0 && std::isfinite(gamma_const)),
            "constant gamma must be nonnegative");
  }
};

/// W(phi) = phi^2 (1 - phi)^2 / 2
constexpr double double_well(double phi) {
  const double q = phi * (1.0 - phi);
  return 0.5 * q * q;
}

/// W'(phi) = phi (1 - phi) (1 - 2 phi)
constexpr double double_well_deriv(double phi) { return phi * (1.0 - phi) * (1.0 - 2.0 * phi); }

/// G(phi) = phi^2 / 2 - phi^3 / 3, a smoothed indicator with G(1) = 1/6.
constexpr double shape_fn(double phi) { return phi * phi * (0.5 - phi / 3.0); }

/// G'(phi) = phi (1 - phi); equals sqrt(2 W(phi)) on [0, 1].
constexpr double shape_fn_deriv(double phi) { return phi * (1.0 - phi); }

namespace detail {

constexpr double int_pow(double x, int m) {
  double result = 1.0;
  while (m > 0) {
    if (m & 1) result *= x;
    x *= x;
    m >>= 1;
  }
  return result;
}

/// gamma(u) without argument checks; u is clamped at zero.
inline double surface_tension_unchecked(double u, const ModelParams& p) {
  if (p.variant == Variant::kConstGamma) return p.gamma_const;
  const double s = u > 0.0 ? u / p.u1 : 0.0;
  return 1.0 / (1.0 + int_pow(s, p.m)) + p.gamma0;
}

}  // namespace detail

/// gamma(u) = 1 / (1 + (u/u1)^m) + gamma0, or the constant of kConstGamma.
inline double surface_tension(double u, const ModelParams& p) {
  if (u < 0.0) throw std::invalid_argument("surface_tension: negative concentration");
  return detail::surface_tension_unchecked(u, p);
}

/// S~ = alpha (int G(phi) - ref_mass).
inline double stilde(const ScalarField& phi, double ref_mass, double alpha) {
  return alpha * (integrate_pointwise(phi, shape_fn) - ref_mass);
}

/// S = alpha (int phi - ref_mass_old).
inline double s_old(const ScalarField& phi, double ref_mass_old, double alpha) {
  return alpha * (integrate(phi) - ref_mass_old);
}

/// The mass functional penalised by the variant: int phi for kSOld, int G(phi) otherwise.
inline double penalised_mass(const ScalarField& phi, Variant variant) {
  return variant == Variant::kSOld ? integrate(phi) : integrate_pointwise(phi, shape_fn);
}

inline double nonlocal_term(const ScalarField& phi, double ref_mass, const ModelParams& p) {
  return p.alpha * (penalised_mass(phi, p.variant) - ref_mass);
}

struct SimState {
  ScalarField phi;
  ScalarField u;
  double t = 0.0;
  double ref_mass = 0.0;  ///< mass functional of the discrete initial phi; fixed
  double stilde = 0.0;    ///< nonlocal term evaluated at the current phi
  double stilde_sq_integral = 0.0;  ///< running int_0^t S~^2 ds
  long step_index = 0;
};

/// Initial state; freezes the reference mass from the discrete initial field so
/// that S~(0) = 0 exactly.
inline SimState make_state(ScalarField phi0, ScalarField u0, const ModelParams& p) {
  p.validate();
  if (!(phi0.grid() == u0.grid())) throw std::invalid_argument("make_state: phi and u live on different grids");
  if (!phi0.all_finite() || !u0.all_finite()) throw std::invalid_argument("make_state: non-finite initial data");
  SimState s;
  s.ref_mass = penalised_mass(phi0, p.variant);
  s.phi = std::move(phi0);
  s.u = std::move(u0);
  s.stilde = 0.0;
  return s;
}

/// Coefficients of the phi equation divided through by tau.
struct RateCoefficients {
  double diffusion;  ///< sigma^2 / tau
  double reaction;   ///< 1 / (2 eps^2 tau)
  double coupling;   ///< 1 / (eps tau)

  explicit RateCoefficients(const ModelParams& p)
      : diffusion(p.sigma * p.sigma / p.tau),
        reaction(1.0 / (2.0 * p.epsilon * p.epsilon * p.tau)),
        coupling(1.0 / (p.epsilon * p.tau)) {}
};

/// d(phi)/dt at one cell given the local Laplacian, surface tension and nonlocal value.
inline double phi_rate(double phi, double lap_phi, double gamma_u, double nonlocal, const RateCoefficients& c) {
  return c.diffusion * lap_phi - c.reaction * double_well_deriv(phi) -
         c.coupling * shape_fn_deriv(phi) * (nonlocal - gamma_u);
}

inline double phi_rate(double phi, double lap_phi, double gamma_u, double nonlocal, const ModelParams& p) {
  return phi_rate(phi, lap_phi, gamma_u, nonlocal, RateCoefficients(p));
}

/// Right-hand side of the phi equation using the state's cached nonlocal value.
inline ScalarField rhs_phi(const SimState& state, const ModelParams& p) {
  const ScalarField lap = laplacian(state.phi);
  ScalarField out(state.phi.grid());
  const std::size_t n = out.size();
  const RateCoefficients coef(p);
  for (std::size_t c = 0; c < n; ++c) {
    const double g = detail::surface_tension_unchecked(state.u[c], p);
    out[c] = phi_rate(state.phi[c], lap[c], g, state.stilde, coef);
    if (!std::isfinite(out[c])) {
      const auto ijk = state.phi.grid().coords(c);
      std::ostringstream msg;
      msg << "rhs_phi: non-finite value at cell (" << ijk[0] << ", " << ijk[1] << ", " << ijk[2] << ")";
      throw NumericalError(msg.str());
    }
  }
  return out;
}

}  // namespace selfprop
