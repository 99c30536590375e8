#pragma once

// Reference solutions of the sharp-interface limit in radially symmetric
// configurations. The interface of a ball of radius R moves with normal
// velocity
//
//   dR/dt = -(n-1)/R + sqrt(2) (gamma - S),   S = (alpha/6) omega_n (R^n - R0^n),
//
// where omega_n is the volume of the unit ball and gamma is either a constant
// or gamma(u(R, t)) for the surfactant solving
//
//   u_t = u_rr + (n-1)/r u_r - k u + chi_{r < R(t)}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfprop/contour.hpp"
#include "selfprop/errors.hpp"
#include "selfprop/grid.hpp"
#include "selfprop/model.hpp"

namespace selfprop {

/// Volume of the unit ball in dimension n (2 or 3).
constexpr double unit_ball_volume(int n) { return n == 2 ? std::numbers::pi : 4.0 * std::numbers::pi / 3.0; }

/// Radius of a circle/sphere under mean-curvature flow: sqrt(R0^2 - 2 (n-1) t).
inline double mcf_radius(double R0, double t, int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("mcf_radius: dimension must be 2 or 3");
  const double r2 = R0 * R0 - 2.0 * (n - 1) * t;
  if (!(r2 > 0.0)) throw std::invalid_argument("mcf_radius: time lies at or beyond extinction");
  return std::sqrt(r2);
}

struct OracleTrajectory {
  std::vector<double> times;
  std::vector<double> radii;
  std::vector<double> u_at_interface;           ///< empty for constant gamma
  std::vector<std::vector<double>> u_profile;   ///< optional radial snapshots (cell centres)
  std::vector<double> profile_times;
  bool extinct = false;                         ///< stopped because R fell below min_radius

  /// Linear interpolation of R at time t (clamped to the recorded range).
  double radius_at(double t) const {
    if (times.empty()) throw std::logic_error("OracleTrajectory: empty");
    if (t <= times.front()) return radii.front();
    if (t >= times.back()) return radii.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return (1.0 - w) * radii[i - 1] + w * radii[i];
  }
};

struct OracleOptions {
  int dimension = 2;
  /// Local error target of the step-doubling check; a step whose full and
  /// two-half-step results differ by more is subdivided.
  double local_tolerance = 1e-12;
  int max_subdivision = 24;
  double min_radius = 1e-3;
  /// Radial profile snapshot every this many steps (0: none).
  int profile_every = 0;
};

namespace detail {

template <class F>
double rk4_step(const F& f, double R, double h) {
  const double k1 = f(R);
  const double k2 = f(R + 0.5 * h * k1);
  const double k3 = f(R + 0.5 * h * k2);
  const double k4 = f(R + h * k3);
  return R + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// One step of size h as two RK4 half steps, recursively subdivided while the
/// step-doubling estimate exceeds the tolerance.
template <class F>
double controlled_step(const F& f, double R, double h, const OracleOptions& opt, int depth = 0) {
  const double full = rk4_step(f, R, h);
  const double half = rk4_step(f, rk4_step(f, R, 0.5 * h), 0.5 * h);
  if (std::abs(full - half) <= opt.local_tolerance || depth >= opt.max_subdivision || !std::isfinite(full)) {
    return half;
  }
  const double mid = controlled_step(f, R, 0.5 * h, opt, depth + 1);
  return controlled_step(f, mid, 0.5 * h, opt, depth + 1);
}

inline double sharp_nonlocal(double R, double R0, double alpha, int n) {
  return alpha / 6.0 * unit_ball_volume(n) * (std::pow(R, n) - std::pow(R0, n));
}

}  // namespace detail

/// Interface radius under the forced law with constant surface tension gamma_hat.
inline OracleTrajectory forced_circle_trajectory(double R0, double gamma_hat, double alpha, double dt, double T,
                                                 const OracleOptions& opt = {}) {
  if (!(R0 > 0.0) || !(dt > 0.0) || T < 0.0) throw std::invalid_argument("forced_circle_trajectory: bad arguments");
  const int n = opt.dimension;
  auto rate = [&](double R) {
    return -(n - 1) / R + std::numbers::sqrt2 * (gamma_hat - detail::sharp_nonlocal(R, R0, alpha, n));
  };
  OracleTrajectory tr;
  tr.times.push_back(0.0);
  tr.radii.push_back(R0);
  double t = 0.0, R = R0;
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  for (long s = 0; s < steps; ++s) {
    const double h = std::min(dt, T - t);
    R = detail::controlled_step(rate, R, h, opt);
    t = (s + 1 == steps) ? T : t + h;
    if (!std::isfinite(R) || R < opt.min_radius) {
      tr.extinct = true;
      break;
    }
    tr.times.push_back(t);
    tr.radii.push_back(R);
  }
  return tr;
}

/// Interface radius coupled to a radial surfactant field. The surfactant is
/// advanced by backward Euler on a cell-centred finite-volume grid over
/// [0, r_max] with zero flux at both ends; the interface ODE sees u at the
/// start of each step (Jacobi coupling), evaluated at R by linear interpolation.
inline OracleTrajectory radial_coupled_solve(double R0, const std::function<double(double)>& u0_profile,
                                             const ModelParams& p, double r_max, double dr, double dt, double T,
                                             const OracleOptions& opt = {}) {
  if (!(R0 > 0.0) || !(dr > 0.0) || !(dt > 0.0)) throw std::invalid_argument("radial_coupled_solve: bad arguments");
  if (r_max < 3.0 * R0) throw std::invalid_argument("radial_coupled_solve: r_max must be at least 3 R0");
  if (dr > R0 / 50.0 * (1.0 + 1e-12)) throw std::invalid_argument("radial_coupled_solve: dr must be at most R0 / 50");
  const int n = opt.dimension;
  const std::size_t cells = static_cast<std::size_t>(std::lround(r_max / dr));

  // Finite-volume metric: cell volumes and face areas up to the common factor
  // of the unit sphere's surface.
  std::vector<double> centre(cells), volume(cells), face(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) face[i] = std::pow(i * dr, n - 1);
  for (std::size_t i = 0; i < cells; ++i) {
    centre[i] = (i + 0.5) * dr;
    volume[i] = (std::pow((i + 1) * dr, n) - std::pow(i * dr, n)) / n;
  }
  std::vector<double> u(cells);
  for (std::size_t i = 0; i < cells; ++i) u[i] = u0_profile(centre[i]);

  auto u_at = [&](double r) {
    if (r <= centre.front()) return u.front();
    if (r >= centre.back()) return u.back();
    const double s = r / dr - 0.5;
    const std::size_t i = static_cast<std::size_t>(s);
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * u[i] + w * u[i + 1];
  };
  auto fill_fraction = [&](std::size_t i, double R) {
    const double lo = i * dr, hi = (i + 1) * dr;
    if (R <= lo) return 0.0;
    if (R >= hi) return 1.0;
    return (std::pow(R, n) - std::pow(lo, n)) / (std::pow(hi, n) - std::pow(lo, n));
  };

  OracleTrajectory tr;
  double t = 0.0, R = R0;
  tr.times.push_back(t);
  tr.radii.push_back(R);
  tr.u_at_interface.push_back(u_at(R));
  if (opt.profile_every > 0) {
    tr.u_profile.push_back(u);
    tr.profile_times.push_back(t);
  }

  std::vector<double> lower(cells), diag(cells), upper(cells), rhs(cells);
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  for (long s = 0; s < steps; ++s) {
    const double h = std::min(dt, T - t);
    auto rate = [&](double r) {
      const double gam = detail::surface_tension_unchecked(u_at(r), p);
      return -(n - 1) / r + std::numbers::sqrt2 * (gam - detail::sharp_nonlocal(r, R0, p.alpha, n));
    };
    const double R_next = detail::controlled_step(rate, R, h, opt);

    // (V (1/h + k) - div grad) u^{n+1} = V (u^n / h + chi_{r < R^n})
    for (std::size_t i = 0; i < cells; ++i) {
      const double west = i == 0 ? 0.0 : face[i] / dr;
      const double east = i + 1 == cells ? 0.0 : face[i + 1] / dr;
      lower[i] = -west;
      upper[i] = -east;
      diag[i] = volume[i] * (1.0 / h + p.k) + west + east;
      rhs[i] = volume[i] * (u[i] / h + fill_fraction(i, R));
    }
    for (std::size_t i = 1; i < cells; ++i) {
      const double w = lower[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    u[cells - 1] = rhs[cells - 1] / diag[cells - 1];
    for (std::size_t i = cells - 1; i-- > 0;) u[i] = (rhs[i] - upper[i] * u[i + 1]) / diag[i];

    R = R_next;
    t = (s + 1 == steps) ? T : t + h;
    if (!std::isfinite(R)) throw NumericalError("radial_coupled_solve: non-finite radius at t = " + std::to_string(t));
    if (R < opt.min_radius) {
      tr.extinct = true;
      break;
    }
    if (R > 0.9 * r_max) {
      std::ostringstream msg;
      msg << "radial_coupled_solve: radius " << R << " exceeds 0.9 r_max at t = " << t;
      throw NumericalError(msg.str());
    }
    tr.times.push_back(t);
    tr.radii.push_back(R);
    tr.u_at_interface.push_back(u_at(R));
    if (opt.profile_every > 0 && (s + 1) % opt.profile_every == 0) {
      tr.u_profile.push_back(u);
      tr.profile_times.push_back(t);
    }
  }
  return tr;
}

namespace detail {

/// Bilinear periodic interpolation of a 2D cell-centred field.
inline double sample_bilinear(const ScalarField& f, const Vec2& x) {
  const Grid& g = f.grid();
  const double sx = x[0] / g.spacing[0] - 0.5, sy = x[1] / g.spacing[1] - 0.5;
  const double fx = std::floor(sx), fy = std::floor(sy);
  const int i = static_cast<int>(fx), j = static_cast<int>(fy);
  const double wx = sx - fx, wy = sy - fy;
  return (1 - wx) * (1 - wy) * f[g.wrapped_index(i, j)] + wx * (1 - wy) * f[g.wrapped_index(i + 1, j)] +
         (1 - wx) * wy * f[g.wrapped_index(i, j + 1)] + wx * wy * f[g.wrapped_index(i + 1, j + 1)];
}

}  // namespace detail

struct PropulsionEstimate {
  Vec2 velocity{0.0, 0.0};   ///< (1/pi) int V(theta) nu(theta) dtheta over the circle
  Vec2 two_sided{0.0, 0.0};  ///< sqrt(2)/2 (gamma(+R e) - gamma(-R e)) per axis
};

/// Centroid velocity of a circular interface of radius R around `center`
/// driven by the surface tension of a frozen 2D surfactant field. Only the
/// first Fourier mode of gamma(u) along the circle moves the centroid.
inline PropulsionEstimate propulsion_velocity(const ScalarField& u, const Vec2& center, double R,
                                              const ModelParams& p, int samples = 720) {
  if (u.grid().ndim != 2) throw std::invalid_argument("propulsion_velocity: 2D field required");
  PropulsionEstimate est;
  auto gamma_at = [&](double th) {
    const Vec2 x{center[0] + R * std::cos(th), center[1] + R * std::sin(th)};
    return detail::surface_tension_unchecked(detail::sample_bilinear(u, x), p);
  };
  double vx = 0.0, vy = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double th = 2.0 * std::numbers::pi * (s + 0.5) / samples;
    const double v = std::numbers::sqrt2 * gamma_at(th);
    vx += v * std::cos(th);
    vy += v * std::sin(th);
  }
  const double w = 2.0 / samples;  // (1/pi) * (2 pi / samples)
  est.velocity = {vx * w, vy * w};
  const double half = 0.5 * std::numbers::pi;
  est.two_sided = {0.5 * std::numbers::sqrt2 * (gamma_at(0.0) - gamma_at(std::numbers::pi)),
                   0.5 * std::numbers::sqrt2 * (gamma_at(half) - gamma_at(3.0 * half))};
  return est;
}

}  // namespace selfprop
