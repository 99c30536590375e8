#pragma once

// Second-order periodic finite-difference operators and midpoint quadrature.

#include <cmath>
#include <cstddef>
#include <string>

#include "selfprop/errors.hpp"
#include "selfprop/grid.hpp"
#include "selfprop/parallel.hpp"

namespace selfprop {

namespace detail {

/// Base offsets of a grid line along axis 0 and of its neighbouring lines.
struct Line {
  std::size_t base;
  std::size_t ym, yp;  // lines at j-1, j+1
  std::size_t zm, zp;  // lines at k-1, k+1 (equal to base in 2D)
};

inline Line line_at(const Grid& g, int j, int k) {
  const int n1 = g.dims[1], n2 = g.dims[2];
  const int jm = j == 0 ? n1 - 1 : j - 1, jp = j == n1 - 1 ? 0 : j + 1;
  const int km = k == 0 ? n2 - 1 : k - 1, kp = k == n2 - 1 ? 0 : k + 1;
  return {g.index(0, j, k), g.index(0, jm, k), g.index(0, jp, k), g.index(0, j, km), g.index(0, j, kp)};
}

/// Calls kernel(line) for every line along axis 0. Lines are independent and
/// processed in parallel.
template <class Kernel>
void for_each_line(const Grid& g, Kernel&& kernel) {
  const int n1 = g.dims[1];
  const int lines = g.dims[1] * g.dims[2];
#pragma omp parallel for schedule(static)
  for (int r = 0; r < lines; ++r) kernel(line_at(g, r % n1, r / n1));
}

/// Discrete Laplacian at cell i of a line whose axis-0 neighbours are im, ip.
inline double laplacian_at(const Grid& g, const double* f, const Line& ln, int i, int im, int ip, double ihx2,
                           double ihy2, double ihz2) {
  const double c = f[ln.base + i];
  double lap = (f[ln.base + im] + f[ln.base + ip] - 2.0 * c) * ihx2 +
               (f[ln.ym + i] + f[ln.yp + i] - 2.0 * c) * ihy2;
  if (g.ndim == 3) lap += (f[ln.zm + i] + f[ln.zp + i] - 2.0 * c) * ihz2;
  return lap;
}

inline double laplacian_at(const Grid& g, const double* f, const Line& ln, int i, double ihx2, double ihy2,
                           double ihz2) {
  const int n0 = g.dims[0];
  return laplacian_at(g, f, ln, i, i == 0 ? n0 - 1 : i - 1, i == n0 - 1 ? 0 : i + 1, ihx2, ihy2, ihz2);
}

/// Calls body(i, im, ip) along a line of n0 cells, peeling the two wrapping
/// ends so the interior loop is branch free.
template <class Body>
inline void for_each_cell_in_line(int n0, Body&& body) {
  body(0, n0 - 1, 1);
  for (int i = 1; i < n0 - 1; ++i) body(i, i - 1, i + 1);
  body(n0 - 1, n0 - 2, 0);
}

struct InverseSpacingSq {
  double x, y, z;
  explicit InverseSpacingSq(const Grid& g)
      : x(1.0 / (g.spacing[0] * g.spacing[0])),
        y(1.0 / (g.spacing[1] * g.spacing[1])),
        z(g.ndim == 3 ? 1.0 / (g.spacing[2] * g.spacing[2]) : 0.0) {}
};

}  // namespace detail

/// Five/seven-point periodic Laplacian.
inline ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g);
  const detail::InverseSpacingSq ih(g);
  const double* in = f.data();
  double* o = out.data();
  detail::for_each_line(g, [&](const detail::Line& ln) {
    for (int i = 0; i < g.dims[0]; ++i) o[ln.base + i] = detail::laplacian_at(g, in, ln, i, ih.x, ih.y, ih.z);
  });
  return out;
}

/// |grad f|^2 from central differences (f(x+h) - f(x-h)) / 2h on every axis.
inline ScalarField grad_sq(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g);
  const double* in = f.data();
  double* o = out.data();
  const double i2hx = 0.5 / g.spacing[0], i2hy = 0.5 / g.spacing[1];
  const double i2hz = g.ndim == 3 ? 0.5 / g.spacing[2] : 0.0;
  const int n0 = g.dims[0];
  detail::for_each_line(g, [&](const detail::Line& ln) {
    for (int i = 0; i < n0; ++i) {
      const int im = i == 0 ? n0 - 1 : i - 1, ip = i == n0 - 1 ? 0 : i + 1;
      const double dx = (in[ln.base + ip] - in[ln.base + im]) * i2hx;
      const double dy = (in[ln.yp + i] - in[ln.ym + i]) * i2hy;
      double s = dx * dx + dy * dy;
      if (g.ndim == 3) {
        const double dz = (in[ln.zp + i] - in[ln.zm + i]) * i2hz;
        s += dz * dz;
      }
      o[ln.base + i] = s;
    }
  });
  return out;
}

/// Cell-centred Dirichlet density: average of the squared forward and backward
/// differences on every axis. Its integral equals sum over edges of
/// (D+ f)^2 h^n, whose exact variation is -2 laplacian(f) h^n, so energies
/// built from it are consistent with `laplacian`.
inline ScalarField dirichlet_density(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g);
  const double* in = f.data();
  double* o = out.data();
  const detail::InverseSpacingSq ih(g);
  const int n0 = g.dims[0];
  detail::for_each_line(g, [&](const detail::Line& ln) {
    for (int i = 0; i < n0; ++i) {
      const int im = i == 0 ? n0 - 1 : i - 1, ip = i == n0 - 1 ? 0 : i + 1;
      const double c = in[ln.base + i];
      auto sq = [](double v) { return v * v; };
      double s = (sq(in[ln.base + ip] - c) + sq(c - in[ln.base + im])) * ih.x +
                 (sq(in[ln.yp + i] - c) + sq(c - in[ln.ym + i])) * ih.y;
      if (g.ndim == 3) s += (sq(in[ln.zp + i] - c) + sq(c - in[ln.zm + i])) * ih.z;
      o[ln.base + i] = 0.5 * s;
    }
  });
  return out;
}

/// Midpoint rule sum(values) * h^n with the fixed reduction order.
inline double integrate(const ScalarField& f) {
  return deterministic_sum(f.values()) * f.grid().cell_volume();
}

/// Integral of term(value) over the grid without materialising the field.
template <class Term>
double integrate_pointwise(const ScalarField& f, Term&& term) {
  const double* v = f.data();
  return deterministic_sum(f.size(), [&](std::size_t i) { return term(v[i]); }) * f.grid().cell_volume();
}

namespace detail {

inline double dot(const ScalarField& a, const ScalarField& b) {
  const double* x = a.data();
  const double* y = b.data();
  return deterministic_sum(a.size(), [&](std::size_t i) { return x[i] * y[i]; });
}

/// out = (a + b) w - laplacian(w)
inline void apply_helmholtz(const ScalarField& w, double shift, ScalarField& out) {
  const Grid& g = w.grid();
  const InverseSpacingSq ih(g);
  const double* in = w.data();
  double* o = out.data();
  for_each_line(g, [&](const Line& ln) {
    for (int i = 0; i < g.dims[0]; ++i)
      o[ln.base + i] = shift * in[ln.base + i] - laplacian_at(g, in, ln, i, ih.x, ih.y, ih.z);
  });
}

}  // namespace detail

struct HelmholtzOptions {
  double rel_tolerance = 1e-10;
  int max_iterations = 2000;
};

/// Solves (a I - laplacian + b I) w = rhs on the periodic grid by conjugate
/// gradients. Throws SolverError carrying the final residual if the relative
/// residual does not reach the tolerance.
inline ScalarField helmholtz_solve(const ScalarField& rhs, double a, double b,
                                   HelmholtzOptions opts = {}) {
  if (!(a > 0.0) || !(b >= 0.0)) {
    throw std::invalid_argument("helmholtz_solve: need a > 0 and b >= 0");
  }
  const Grid& g = rhs.grid();
  const double shift = a + b;
  const double rhs_norm = std::sqrt(detail::dot(rhs, rhs));
  ScalarField w(g);
  if (rhs_norm == 0.0) return w;

  const std::size_t n = rhs.size();
  for (std::size_t i = 0; i < n; ++i) w[i] = rhs[i] / shift;
  ScalarField r(g), p(g), ap(g);
  detail::apply_helmholtz(w, shift, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
  p = r;
  double rr = detail::dot(r, r);
  const double target = opts.rel_tolerance * rhs_norm;

  for (int it = 0; it < opts.max_iterations && std::sqrt(rr) > 0.5 * target; ++it) {
    detail::apply_helmholtz(p, shift, ap);
    const double step = rr / detail::dot(p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] += step * p[i];
      r[i] -= step * ap[i];
    }
    const double rr_new = detail::dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }

  // Report the true residual, not the recursively updated one.
  detail::apply_helmholtz(w, shift, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = ap[i] - rhs[i];
  const double residual = std::sqrt(detail::dot(r, r));
  if (!(residual <= target)) {
    throw SolverError("helmholtz_solve: residual " + std::to_string(residual / rhs_norm) +
                          " (relative) above tolerance",
                      residual);
  }
  return w;
}

}  // namespace selfprop
