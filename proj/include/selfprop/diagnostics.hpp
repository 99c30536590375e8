#pragma once

// Energies, equipartition discrepancy, maximum-principle envelopes and the
// a-priori bounds that the phase-field solution must respect.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "selfprop/grid.hpp"
#include "selfprop/model.hpp"
#include "selfprop/operators.hpp"

namespace selfprop {

struct EnergyReport {
  double t = 0.0;
  double E_s = 0.0;       ///< int (eps sigma^2 |grad phi|^2 / 2 + W(phi) / (2 eps))
  double E_p = 0.0;       ///< alpha/2 (mass - ref_mass)^2
  double E = 0.0;         ///< E_s + E_p
  double xi = 0.0;        ///< int |eps sigma^2 |grad phi|^2 / 2 - W(phi) / (2 eps)|
  double mu_total = 0.0;  ///< total mass of the diffuse surface measure
  double stilde = 0.0;
  double mass_G = 0.0;    ///< int G(phi)
  double phi_min = 0.0;
  double phi_max = 0.0;
  double u_min = 0.0;
  double stilde_l2_accum = 0.0;
};

namespace detail {

struct SurfaceTerms {
  double gradient;   // eps sigma^2 |grad phi|^2 / 2
  double potential;  // W(phi) / (2 eps)
};

inline SurfaceTerms surface_terms(double dirichlet, double phi, const ModelParams& p) {
  return {0.5 * p.epsilon * p.sigma * p.sigma * dirichlet, double_well(phi) / (2.0 * p.epsilon)};
}

}  // namespace detail

/// Density of the diffuse surface measure, eps |grad phi|^2 / 2 + W(phi) / (2 eps).
inline ScalarField measure_density(const SimState& state, const ModelParams& p) {
  ScalarField out = dirichlet_density(state.phi);
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto s = detail::surface_terms(out[c], state.phi[c], p);
    out[c] = s.gradient + s.potential;
  }
  return out;
}

inline EnergyReport energy_report(const SimState& state, const ModelParams& p) {
  const ScalarField grad = dirichlet_density(state.phi);
  const double hn = state.phi.grid().cell_volume();
  const double* gd = grad.data();
  const double* phi = state.phi.data();

  EnergyReport r;
  r.t = state.t;
  r.mu_total = deterministic_sum(grad.size(), [&](std::size_t c) {
                 const auto s = detail::surface_terms(gd[c], phi[c], p);
                 return s.gradient + s.potential;
               }) * hn;
  r.xi = deterministic_sum(grad.size(), [&](std::size_t c) {
           const auto s = detail::surface_terms(gd[c], phi[c], p);
           return std::abs(s.gradient - s.potential);
         }) * hn;
  r.E_s = r.mu_total;
  const double drift = penalised_mass(state.phi, p.variant) - state.ref_mass;
  r.E_p = 0.5 * p.alpha * drift * drift;
  r.E = r.E_s + r.E_p;
  r.stilde = state.stilde;
  r.mass_G = integrate_pointwise(state.phi, shape_fn);
  r.phi_min = state.phi.min();
  r.phi_max = state.phi.max();
  r.u_min = state.u.min();
  r.stilde_l2_accum = state.stilde_sq_integral;
  return r;
}

/// Constants of the sub/super solutions bounding phi and u.
struct EnvelopeParams {
  double D1 = 0.0;  ///< 1 - max(1/2, max phi_0)
  double D2 = 0.0;  ///< eps^-2 [1/2 + eps (M_gamma + |Omega| alpha / 3)]
  double D3 = 0.0;  ///< min phi_0
  double D4 = 0.0;  ///< min u_0
  double k = 1.0;

  double phi_upper(double t) const { return 1.0 - D1 * std::exp(-D2 * t); }
  double phi_lower(double t) const { return D3 * std::exp(-D2 * t); }
  double u_lower(double t) const { return D4 * std::exp(-k * t); }
};

inline EnvelopeParams make_envelope(const ScalarField& phi0, const ScalarField& u0, const ModelParams& p) {
  EnvelopeParams env;
  env.D1 = 1.0 - std::max(0.5, phi0.max());
  env.D2 = (0.5 + p.epsilon * (p.max_gamma() + phi0.grid().volume() * p.alpha / 3.0)) /
           (p.epsilon * p.epsilon);
  env.D3 = phi0.min();
  env.D4 = u0.min();
  env.k = p.k;
  return env;
}

inline constexpr double kEnvelopeTolerance = 1e-8;

struct EnvelopeResult {
  bool pass = true;
  double upper_margin = 0.0;  ///< phi_upper(t) - max phi; negative beyond the bound
  double lower_margin = 0.0;  ///< min phi - phi_lower(t)
  double u_margin = 0.0;      ///< min u - u_lower(t)
};

inline EnvelopeResult envelope_check(const SimState& state, const EnvelopeParams& env, double tol = kEnvelopeTolerance) {
  EnvelopeResult r;
  r.upper_margin = env.phi_upper(state.t) - state.phi.max();
  r.lower_margin = state.phi.min() - env.phi_lower(state.t);
  r.u_margin = state.u.min() - env.u_lower(state.t);
  r.pass = r.upper_margin >= -tol && r.lower_margin >= -tol && r.u_margin >= -tol;
  return r;
}

/// sqrt((2 / alpha) e^{2 M_gamma^2 t} E(0)): bound on |int G(phi) - int G(phi_0)|.
inline double volume_drift_bound(double E0, double t, const ModelParams& p) {
  if (!(p.alpha > 0.0)) return INFINITY;
  const double mg = p.max_gamma();
  return std::sqrt(2.0 / p.alpha * std::exp(2.0 * mg * mg * t) * E0);
}

/// Relative slack applied to every a-priori bound.
inline constexpr double kBoundSlack = 0.05;

inline bool volume_drift_ok(const EnergyReport& report, double E0, double ref_mass_G, const ModelParams& p) {
  const double drift = std::abs(report.mass_G - ref_mass_G);
  return drift <= (1.0 + kBoundSlack) * volume_drift_bound(E0, report.t, p);
}

/// e^{-2 M_gamma^2 t} E(t) <= (1 + slack) E(0).
inline bool gronwall_ok(const EnergyReport& report, double E0, const ModelParams& p) {
  const double mg = p.max_gamma();
  return std::exp(-2.0 * mg * mg * report.t) * report.E <= (1.0 + kBoundSlack) * E0;
}

/// |S~| <= alpha |Omega| / 3 (|S| <= alpha |Omega| for the old variant).
inline bool nonlocal_bound_ok(const EnergyReport& report, double volume, const ModelParams& p) {
  const double bound = p.variant == Variant::kSOld ? p.alpha * volume : p.alpha * volume / 3.0;
  return std::abs(report.stilde) <= bound * (1.0 + 1e-12) + 1e-14;
}

}  // namespace selfprop
