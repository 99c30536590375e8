#pragma once

// Uniform cell-centred lattice on the periodic box (R / L_0 Z) x ... and the
// scalar fields that live on it.
//
// Cells are stored with axis 0 varying fastest:
//     index(i, j, k) = i + n0 * (j + n1 * k)
// which is the x-fastest order used by the VTK writer.

#include <array>
#include <limits>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfprop/parallel.hpp"

namespace selfprop {

using Vec3 = std::array<double, 3>;

struct Grid {
  int ndim = 2;
  std::array<int, 3> dims{1, 1, 1};
  Vec3 lengths{1.0, 1.0, 1.0};
  Vec3 spacing{1.0, 1.0, 1.0};

  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
  }

  /// h^n: measure of one cell.
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < ndim; ++a) v *= spacing[a];
    return v;
  }

  /// |Omega|.
  double volume() const {
    double v = 1.0;
    for (int a = 0; a < ndim; ++a) v *= lengths[a];
    return v;
  }

  double min_spacing() const {
    double h = spacing[0];
    for (int a = 1; a < ndim; ++a) h = std::min(h, spacing[a]);
    return h;
  }

  std::size_t index(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(k));
  }

  /// Index with periodic wrap on every axis.
  std::size_t wrapped_index(int i, int j, int k = 0) const {
    auto wrap = [](int v, int n) { return ((v % n) + n) % n; };
    return index(wrap(i, dims[0]), wrap(j, dims[1]), wrap(k, dims[2]));
  }

  std::array<int, 3> coords(std::size_t idx) const {
    const auto n0 = static_cast<std::size_t>(dims[0]);
    const auto n1 = static_cast<std::size_t>(dims[1]);
    return {static_cast<int>(idx % n0), static_cast<int>((idx / n0) % n1),
            static_cast<int>(idx / (n0 * n1))};
  }

  /// Physical position of the centre of cell idx.
  Vec3 cell_center(std::size_t idx) const {
    const auto c = coords(idx);
    Vec3 x{0.0, 0.0, 0.0};
    for (int a = 0; a < ndim; ++a) x[a] = (c[a] + 0.5) * spacing[a];
    return x;
  }

  /// Minimal-image displacement b - a on the torus.
  Vec3 displacement(const Vec3& a, const Vec3& b) const {
    Vec3 d{0.0, 0.0, 0.0};
    for (int ax = 0; ax < ndim; ++ax) {
      double v = b[ax] - a[ax];
      v -= lengths[ax] * std::round(v / lengths[ax]);
      d[ax] = v;
    }
    return d;
  }

  double distance(const Vec3& a, const Vec3& b) const {
    const Vec3 d = displacement(a, b);
    return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  }

  bool operator==(const Grid&) const = default;
};

/// Builds a grid with 2 or 3 axes, at least 8 cells and positive length per axis.
inline Grid make_grid(std::span<const int> dims, std::span<const double> lengths) {
  if (dims.size() != lengths.size()) {
    throw std::invalid_argument("make_grid: dims has " + std::to_string(dims.size()) +
                                " entries but lengths has " + std::to_string(lengths.size()));
  }
  if (dims.size() < 2 || dims.size() > 3) {
    throw std::invalid_argument("make_grid: number of axes must be 2 or 3, got " +
                                std::to_string(dims.size()));
  }
  Grid g;
  g.ndim = static_cast<int>(dims.size());
  for (std::size_t a = 0; a < dims.size(); ++a) {
    if (dims[a] < 8) {
      throw std::invalid_argument("make_grid: dims[" + std::to_string(a) + "] = " +
                                  std::to_string(dims[a]) + " is below the minimum of 8");
    }
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw std::invalid_argument("make_grid: lengths[" + std::to_string(a) + "] must be positive");
    }
    g.dims[a] = dims[a];
    g.lengths[a] = lengths[a];
    g.spacing[a] = lengths[a] / dims[a];
  }
  return g;
}

inline Grid make_grid(std::initializer_list<int> dims, std::initializer_list<double> lengths) {
  return make_grid(std::span<const int>(dims.begin(), dims.size()),
                   std::span<const double>(lengths.begin(), lengths.size()));
}

/// Square/cubic unit-length grid with n cells per axis.
inline Grid make_uniform_grid(int ndim, int n, double length = 1.0) {
  std::vector<int> d(static_cast<std::size_t>(ndim), n);
  std::vector<double> l(static_cast<std::size_t>(ndim), length);
  return make_grid(d, l);
}

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0) : grid_(grid), values_(grid.size(), fill) {}
  ScalarField(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw std::invalid_argument("ScalarField: value count " + std::to_string(values_.size()) +
                                  " does not match grid size " + std::to_string(grid_.size()));
    }
  }

  /// Samples f at every cell centre.
  template <class F>
  static ScalarField from_function(const Grid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t c = 0; c < out.size(); ++c) out.values_[c] = f(grid.cell_center(c));
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Extrema and finiteness in a single pass.
  struct Range {
    double min = 0.0;
    double max = 0.0;
    bool finite = true;
  };

  Range range() const {
    Range r;
    if (values_.empty()) return r;
    double lo = values_[0], hi = values_[0];
    bool ok = true;
    for (double v : values_) {
      lo = v < lo ? v : lo;
      hi = v > hi ? v : hi;
      ok &= std::abs(v) <= std::numeric_limits<double>::max();
    }
    return {lo, hi, ok};
  }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double min() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
  }

  double max() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::max(m, v);
    return m;
  }

  /// Periodic translation by `cells` along `axis`: out(x + cells*h) = in(x).
  ScalarField shifted(int axis, int cells) const {
    ScalarField out(grid_);
    for (std::size_t c = 0; c < size(); ++c) {
      auto ijk = grid_.coords(c);
      ijk[static_cast<std::size_t>(axis)] += cells;
      out.values_[grid_.wrapped_index(ijk[0], ijk[1], ijk[2])] = values_[c];
    }
    return out;
  }

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

}  // namespace selfprop
