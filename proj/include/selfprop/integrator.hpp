#pragma once

// Forward-Euler time stepping of the coupled (phi, u) system.
//
// phi is always explicit. u is either explicit or backward Euler through
// helmholtz_solve. Both updates read the state at t^n (Jacobi ordering), and
// the nonlocal term entering step n is the one evaluated on phi^n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>

#include "selfprop/errors.hpp"
#include "selfprop/grid.hpp"
#include "selfprop/model.hpp"
#include "selfprop/operators.hpp"

namespace selfprop {

enum class UScheme { kExplicit, kImplicit };

struct StepPolicy {
  double cfl_safety = 0.5;
  UScheme u_scheme = UScheme::kExplicit;
  std::optional<double> dt_override;
  bool check_invariants = true;
};

/// Tolerances of the monitored maximum principle.
inline constexpr double kPhiBoundTolerance = 1e-9;
inline constexpr double kUBoundTolerance = 1e-12;

/// cfl_safety * min(tau h^2 / (2 n sigma^2), tau eps^2, h^2 / (2 n)); the last
/// (u-diffusion) bound is dropped for the implicit u scheme.
inline double stable_dt(const Grid& grid, const ModelParams& p, const StepPolicy& policy) {
  const double h2 = grid.min_spacing() * grid.min_spacing();
  const double two_n = 2.0 * grid.ndim;
  double dt = std::min(p.tau * h2 / (two_n * p.sigma * p.sigma), p.tau * p.epsilon * p.epsilon);
  if (policy.u_scheme == UScheme::kExplicit) dt = std::min(dt, h2 / two_n);
  return policy.cfl_safety * dt;
}

/// The step the loop will use: the override if present, the stable step otherwise.
inline double resolve_dt(const Grid& grid, const ModelParams& p, const StepPolicy& policy) {
  if (!(policy.cfl_safety > 0.0 && policy.cfl_safety <= 1.0)) {
    throw std::invalid_argument("StepPolicy: cfl_safety must lie in (0, 1]");
  }
  const double stable = stable_dt(grid, p, policy);
  if (!policy.dt_override) return stable;
  const double dt = *policy.dt_override;
  if (!(dt > 0.0)) throw std::invalid_argument("StepPolicy: dt_override must be positive");
  if (policy.u_scheme == UScheme::kExplicit && dt > stable * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL exceeded: dt_override " << dt << " > stable dt " << stable;
    throw InvariantError(msg.str());
  }
  return dt;
}

/// Scratch buffers reused across steps.
struct StepWorkspace {
  ScalarField phi_next;
  ScalarField u_next;
};

/// Advances `state` by dt in place.
inline void advance(SimState& state, const ModelParams& p, double dt, const StepPolicy& policy,
                    StepWorkspace& ws) {
  const Grid& g = state.phi.grid();
  if (!(ws.phi_next.grid() == g) || ws.phi_next.size() != g.size()) ws.phi_next = ScalarField(g);
  if (!(ws.u_next.grid() == g) || ws.u_next.size() != g.size()) ws.u_next = ScalarField(g);

  const detail::InverseSpacingSq ih(g);
  const double* phi = state.phi.data();
  const double* u = state.u.data();
  double* phi_out = ws.phi_next.data();
  double* u_out = ws.u_next.data();
  const double nonlocal = state.stilde;
  const bool explicit_u = policy.u_scheme == UScheme::kExplicit;
  const int n0 = g.dims[0];
  const RateCoefficients coef(p);

  const bool const_gamma = p.variant == Variant::kConstGamma;
  auto kernel = [&](auto three_d) {
    detail::for_each_line(g, [&](const detail::Line& ln) {
      // Local copies: the stores below may alias anything reached through a reference.
      const double h = dt, k = p.k, s = nonlocal, g_const = p.gamma_const;
      const double ihx = ih.x, ihy = ih.y, ihz = ih.z;
      const RateCoefficients cf = coef;
      const double* __restrict f = phi + ln.base;
      const double* __restrict fym = phi + ln.ym;
      const double* __restrict fyp = phi + ln.yp;
      const double* __restrict fzm = phi + ln.zm;
      const double* __restrict fzp = phi + ln.zp;
      const double* __restrict w = u + ln.base;
      const double* __restrict wym = u + ln.ym;
      const double* __restrict wyp = u + ln.yp;
      const double* __restrict wzm = u + ln.zm;
      const double* __restrict wzp = u + ln.zp;
      double* __restrict f_out = phi_out + ln.base;
      double* __restrict w_out = u_out + ln.base;
      detail::for_each_cell_in_line(n0, [&](int i, int im, int ip) {
        double lap_phi = (f[im] + f[ip] - 2.0 * f[i]) * ihx + (fym[i] + fyp[i] - 2.0 * f[i]) * ihy;
        if constexpr (decltype(three_d)::value) lap_phi += (fzm[i] + fzp[i] - 2.0 * f[i]) * ihz;
        const double gam = const_gamma ? g_const : detail::surface_tension_unchecked(w[i], p);
        f_out[i] = f[i] + h * phi_rate(f[i], lap_phi, gam, s, cf);
        if (explicit_u) {
          double lap_u = (w[im] + w[ip] - 2.0 * w[i]) * ihx + (wym[i] + wyp[i] - 2.0 * w[i]) * ihy;
          if constexpr (decltype(three_d)::value) lap_u += (wzm[i] + wzp[i] - 2.0 * w[i]) * ihz;
          w_out[i] = w[i] + h * (lap_u - k * w[i] + f[i]);
        } else {
          w_out[i] = w[i] / h + f[i];
        }
      });
    });
  };
  if (g.ndim == 3) kernel(std::true_type{});
  else kernel(std::false_type{});

  // (1/dt + k - lap) u^{n+1} = u^n / dt + phi^n
  if (!explicit_u) ws.u_next = helmholtz_solve(ws.u_next, 1.0 / dt, p.k);

  std::swap(state.phi, ws.phi_next);
  std::swap(state.u, ws.u_next);
  state.stilde_sq_integral += nonlocal * nonlocal * dt;
  state.t += dt;
  state.step_index += 1;
  state.stilde = nonlocal_term(state.phi, state.ref_mass, p);

  const auto pr = state.phi.range();
  const auto ur = state.u.range();
  if (!std::isfinite(state.stilde) || !pr.finite || !ur.finite) {
    throw NumericalError("non-finite field value at step " + std::to_string(state.step_index));
  }
  if (policy.check_invariants &&
      (pr.min <= -kPhiBoundTolerance || pr.max >= 1.0 + kPhiBoundTolerance || ur.min <= -kUBoundTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "max principle violated at step " << state.step_index << " (t = " << state.t << "): phi in [" << pr.min
        << ", " << pr.max << "], min u = " << ur.min;
    throw InvariantError(msg.str());
  }
}

/// One step on a copy of the state.
inline SimState step(SimState state, const ModelParams& p, double dt, const StepPolicy& policy) {
  StepWorkspace ws;
  advance(state, p, dt, policy, ws);
  return state;
}

using StepObserver = std::function<void(const SimState&)>;

/// Steps until t_end, landing exactly on it. The observer sees the initial
/// state, every `cadence`-th step and the final state. Returns the number of
/// steps taken.
inline long run_until(SimState& state, const ModelParams& p, const StepPolicy& policy, double t_end,
                      long cadence, const StepObserver& observer = {}) {
  if (t_end < state.t) throw std::invalid_argument("run_until: t_end lies before the current time");
  if (cadence < 1) throw std::invalid_argument("run_until: cadence must be at least 1");
  if (t_end == state.t) return 0;
  const double dt = resolve_dt(state.phi.grid(), p, policy);
  StepWorkspace ws;
  if (observer) observer(state);
  long steps = 0;
  bool recorded_last = true;
  while (state.t < t_end) {
    double h = dt;
    const bool last = state.t + dt >= t_end * (1.0 - 1e-14) - 1e-300;
    if (last) h = t_end - state.t;
    advance(state, p, h, policy, ws);
    if (last) state.t = t_end;
    ++steps;
    recorded_last = false;
    if (steps % cadence == 0 || last) {
      if (observer) observer(state);
      recorded_last = true;
    }
    if (last) break;
  }
  if (!recorded_last && observer) observer(state);
  return steps;
}

}  // namespace selfprop
