#pragma once

// Level-set extraction on the periodic 2D grid.
//
// Marching squares runs over the dual lattice whose corners are cell centres.
// Each dual cell is cut by the piecewise-linear level set into an "inside"
// polygon (values > level) traversed counter-clockwise; its edges that join two
// crossing points are the contour segments, so the inside region always lies
// to the left of a segment. Saddle cells are resolved by the average of the
// four corner values. Area and centroid come from the same polygons, which
// keeps them consistent with the extracted curve for every topology.
//
//      3 --e2-- 2
//      |        |
//      e3       e1
//      |        |
//      0 --e0-- 1

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "selfprop/grid.hpp"

namespace selfprop {

using Vec2 = std::array<double, 2>;

struct ContourLoop {
  std::vector<Vec2> vertices;  ///< unwrapped: consecutive vertices are adjacent in the plane
  std::array<int, 2> winding{0, 0};  ///< periods crossed when closing the loop
};

struct InterfaceCurve {
  std::vector<ContourLoop> loops;
  double area = 0.0;       ///< measure of {phi > level}
  double perimeter = 0.0;
  Vec2 centroid{0.0, 0.0};  ///< circular-mean centroid of {phi > level}, in [0, L)
  Vec2 lengths{1.0, 1.0};  ///< periods of the domain

  std::size_t vertex_count() const {
    std::size_t n = 0;
    for (const auto& l : loops) n += l.vertices.size();
    return n;
  }
};

namespace detail {

struct PolyVertex {
  Vec2 pos;
  long edge;  // global crossing-edge id, -1 for a corner
};

struct Segment {
  long from_edge, to_edge;
  Vec2 from, to;
};

inline double polygon_area(const std::vector<PolyVertex>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i].pos;
    const auto& q = poly[(i + 1) % poly.size()].pos;
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

/// Area-weighted centroid numerator (sum of A * c) of a simple polygon.
inline Vec2 polygon_moment(const std::vector<PolyVertex>& poly) {
  Vec2 m{0.0, 0.0};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i].pos;
    const auto& q = poly[(i + 1) % poly.size()].pos;
    const double cr = p[0] * q[1] - q[0] * p[1];
    m[0] += (p[0] + q[0]) * cr;
    m[1] += (p[1] + q[1]) * cr;
  }
  return {m[0] / 6.0, m[1] / 6.0};
}

}  // namespace detail

/// Extracts the `level` set of a 2D periodic field. Throws for 3D input.
inline InterfaceCurve extract_contour(const ScalarField& phi, double level = 0.5) {
  const Grid& g = phi.grid();
  if (g.ndim != 2) throw std::invalid_argument("extract_contour: interface extraction is 2D only");
  const int n0 = g.dims[0], n1 = g.dims[1];
  const double hx = g.spacing[0], hy = g.spacing[1];
  const double Lx = g.lengths[0], Ly = g.lengths[1];

  InterfaceCurve curve;
  curve.lengths = {Lx, Ly};

  auto value = [&](int i, int j) { return phi[g.wrapped_index(i, j)]; };
  auto horizontal_id = [&](int i, int j) { return 2L * (static_cast<long>(j % n1) * n0 + (i % n0)); };
  auto vertical_id = [&](int i, int j) { return 2L * (static_cast<long>(j % n1) * n0 + (i % n0)) + 1; };
  // Crossing positions are computed once per edge in its canonical frame so the
  // two dual cells sharing an edge see identical coordinates.
  auto crossing = [&](double va, double vb) { return (level - va) / (vb - va); };

  std::vector<detail::Segment> segments;
  double area = 0.0;
  double cos_x = 0.0, sin_x = 0.0, cos_y = 0.0, sin_y = 0.0;
  const double kx = 2.0 * std::numbers::pi / Lx, ky = 2.0 * std::numbers::pi / Ly;

  auto accumulate = [&](const std::vector<detail::PolyVertex>& poly) {
    for (std::size_t v = 0; v < poly.size(); ++v) {
      const auto& p = poly[v];
      const auto& q = poly[(v + 1) % poly.size()];
      if (p.edge >= 0 && q.edge >= 0) segments.push_back({p.edge, q.edge, p.pos, q.pos});
    }
    const double a = detail::polygon_area(poly);
    if (a <= 0.0) return;
    const Vec2 mom = detail::polygon_moment(poly);
    const double cx = mom[0] / a, cy = mom[1] / a;
    area += a;
    cos_x += a * std::cos(kx * cx);
    sin_x += a * std::sin(kx * cx);
    cos_y += a * std::cos(ky * cy);
    sin_y += a * std::sin(ky * cy);
  };

  std::vector<detail::PolyVertex> poly, second;
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n0; ++i) {
      const double x0 = (i + 0.5) * hx, y0 = (j + 0.5) * hy;
      const std::array<double, 4> v{value(i, j), value(i + 1, j), value(i + 1, j + 1), value(i, j + 1)};
      const std::array<Vec2, 4> corner{Vec2{x0, y0}, Vec2{x0 + hx, y0}, Vec2{x0 + hx, y0 + hy}, Vec2{x0, y0 + hy}};
      std::array<bool, 4> in{};
      int n_in = 0;
      for (int c = 0; c < 4; ++c) n_in += (in[c] = v[c] > level) ? 1 : 0;
      if (n_in == 0) continue;
      if (n_in == 4) {
        const double a = hx * hy;
        area += a;
        const double cx = x0 + 0.5 * hx, cy = y0 + 0.5 * hy;
        cos_x += a * std::cos(kx * cx);
        sin_x += a * std::sin(kx * cx);
        cos_y += a * std::cos(ky * cy);
        sin_y += a * std::sin(ky * cy);
        continue;
      }
      // Crossing points of the four edges, canonical orientation per edge.
      const std::array<long, 4> edge_id{horizontal_id(i, j), vertical_id(i + 1, j), horizontal_id(i, j + 1),
                                        vertical_id(i, j)};
      std::array<Vec2, 4> cross{};
      if (in[0] != in[1]) cross[0] = {x0 + crossing(v[0], v[1]) * hx, y0};
      if (in[1] != in[2]) cross[1] = {x0 + hx, y0 + crossing(v[1], v[2]) * hy};
      if (in[3] != in[2]) cross[2] = {x0 + crossing(v[3], v[2]) * hx, y0 + hy};
      if (in[0] != in[3]) cross[3] = {x0, y0 + crossing(v[0], v[3]) * hy};

      const bool saddle = n_in == 2 && in[0] == in[2];
      const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
      if (saddle && !(center > level)) {
        // Two separated inside corners: one triangle around each.
        const int a = in[0] ? 0 : 1;
        const int b = a + 2;
        poly = {{corner[a], -1}, {cross[a], edge_id[a]}, {cross[(a + 3) % 4], edge_id[(a + 3) % 4]}};
        second = {{corner[b], -1}, {cross[b], edge_id[b]}, {cross[(b + 3) % 4], edge_id[(b + 3) % 4]}};
        accumulate(poly);
        accumulate(second);
        continue;
      }
      poly.clear();
      for (int c = 0; c < 4; ++c) {
        if (in[c]) poly.push_back({corner[c], -1});
        if (in[c] != in[(c + 1) % 4]) poly.push_back({cross[c], edge_id[c]});
      }
      accumulate(poly);
    }
  }

  curve.area = area;
  if (area > 0.0) {
    auto wrap_angle = [](double s, double c, double L) {
      double a = std::atan2(s, c);
      if (a < 0.0) a += 2.0 * std::numbers::pi;
      return a / (2.0 * std::numbers::pi) * L;
    };
    curve.centroid = {wrap_angle(sin_x, cos_x, Lx), wrap_angle(sin_y, cos_y, Ly)};
  }

  // Chain the oriented segments into closed loops.
  std::unordered_map<long, std::size_t> starting_at;
  starting_at.reserve(segments.size() * 2);
  for (std::size_t s = 0; s < segments.size(); ++s) starting_at.emplace(segments[s].from_edge, s);
  std::vector<bool> used(segments.size(), false);
  auto unwrap_near = [&](const Vec2& p, const Vec2& ref) {
    return Vec2{p[0] - Lx * std::round((p[0] - ref[0]) / Lx), p[1] - Ly * std::round((p[1] - ref[1]) / Ly)};
  };
  for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    ContourLoop loop;
    Vec2 cursor = segments[s0].from;
    std::size_t s = s0;
    while (!used[s]) {
      used[s] = true;
      const auto& seg = segments[s];
      const Vec2 start = unwrap_near(seg.from, cursor);
      const Vec2 end{start[0] + (seg.to[0] - seg.from[0]), start[1] + (seg.to[1] - seg.from[1])};
      loop.vertices.push_back(start);
      curve.perimeter += std::hypot(end[0] - start[0], end[1] - start[1]);
      cursor = end;
      auto it = starting_at.find(seg.to_edge);
      if (it == starting_at.end()) break;
      s = it->second;
    }
    const Vec2& first = loop.vertices.front();
    loop.winding = {static_cast<int>(std::lround((cursor[0] - first[0]) / Lx)),
                    static_cast<int>(std::lround((cursor[1] - first[1]) / Ly))};
    curve.loops.push_back(std::move(loop));
  }
  return curve;
}

/// sqrt(area / pi).
inline double radius_from_area(const InterfaceCurve& curve) { return std::sqrt(curve.area / std::numbers::pi); }

/// Symmetric Hausdorff distance between the curve and the circle |x - center| = radius
/// on the torus. Curve-to-circle uses every vertex; circle-to-curve samples the
/// circle densely and measures the distance to the nearest segment.
inline double hausdorff_to_circle(const InterfaceCurve& curve, const Vec2& center, double radius) {
  if (curve.vertex_count() == 0) throw std::invalid_argument("hausdorff_to_circle: empty curve");
  const double Lx = curve.lengths[0], Ly = curve.lengths[1];
  auto rel = [&](const Vec2& p) {
    double dx = p[0] - center[0], dy = p[1] - center[1];
    dx -= Lx * std::round(dx / Lx);
    dy -= Ly * std::round(dy / Ly);
    return Vec2{dx, dy};
  };

  // Segments in the frame centred at `center`.
  std::vector<std::array<Vec2, 2>> segs;
  double worst = 0.0;
  for (const auto& loop : curve.loops) {
    const std::size_t n = loop.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = rel(loop.vertices[i]);
      Vec2 b = loop.vertices[(i + 1) % n];
      if (i + 1 == n) b = {b[0] + loop.winding[0] * Lx, b[1] + loop.winding[1] * Ly};
      const Vec2 d{b[0] - loop.vertices[i][0], b[1] - loop.vertices[i][1]};
      segs.push_back({a, Vec2{a[0] + d[0], a[1] + d[1]}});
      worst = std::max(worst, std::abs(std::hypot(a[0], a[1]) - radius));
    }
  }

  const std::size_t samples = std::max<std::size_t>(256, 8 * segs.size());
  for (std::size_t k = 0; k < samples; ++k) {
    const double th = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
    const Vec2 s{radius * std::cos(th), radius * std::sin(th)};
    double best = INFINITY;
    for (const auto& seg : segs) {
      const Vec2 ab{seg[1][0] - seg[0][0], seg[1][1] - seg[0][1]};
      const Vec2 as{s[0] - seg[0][0], s[1] - seg[0][1]};
      const double len2 = ab[0] * ab[0] + ab[1] * ab[1];
      const double t = len2 > 0.0 ? std::clamp((as[0] * ab[0] + as[1] * ab[1]) / len2, 0.0, 1.0) : 0.0;
      best = std::min(best, std::hypot(as[0] - t * ab[0], as[1] - t * ab[1]));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

struct CentroidDrift {
  std::vector<Vec2> displacement;  ///< unwrapped displacement from the first sample
  std::vector<Vec2> velocity;      ///< forward differences between consecutive samples
};

/// Unwrapped centroid displacement of a time series of curves.
inline CentroidDrift centroid_drift(const std::vector<InterfaceCurve>& curves, const std::vector<double>& times) {
  if (curves.size() < 2 || times.size() != curves.size()) {
    throw std::invalid_argument("centroid_drift: need at least two samples with matching times");
  }
  CentroidDrift out;
  out.displacement.push_back({0.0, 0.0});
  Vec2 acc{0.0, 0.0};
  for (std::size_t i = 1; i < curves.size(); ++i) {
    const auto& L = curves[i].lengths;
    Vec2 step{curves[i].centroid[0] - curves[i - 1].centroid[0], curves[i].centroid[1] - curves[i - 1].centroid[1]};
    step[0] -= L[0] * std::round(step[0] / L[0]);
    step[1] -= L[1] * std::round(step[1] / L[1]);
    acc = {acc[0] + step[0], acc[1] + step[1]};
    out.displacement.push_back(acc);
    const double dt = times[i] - times[i - 1];
    out.velocity.push_back({step[0] / dt, step[1] / dt});
  }
  return out;
}

}  // namespace selfprop
