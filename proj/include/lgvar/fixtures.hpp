#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "lgvar/errors.hpp"
#include "lgvar/geometry.hpp"
#include "lgvar/graph.hpp"

namespace lgvar::fixtures {

inline Point2 pt(long x, long y) { return {Rational(x), Rational(y)}; }

inline std::vector<Segment> polyline(const std::vector<Point2>& pts, bool closed = false) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) segs.emplace_back(pts[i], pts[i + 1]);
  if (closed) segs.emplace_back(pts.back(), pts.front());
  return segs;
}

/// [-π, π] ∪ i[-π, π], with π rounded to the nearest double and taken exactly.
inline LinearGraph cross() {
  const Rational pi = Rational::from_double(std::numbers::pi);
  const Rational zero(0);
  return properize({Segment({-pi, zero}, {pi, zero}), Segment({zero, -pi}, {zero, pi})});
}

inline LinearGraph unit_segment() { return LinearGraph::from_segments({Segment(pt(0, 0), pt(1, 0))}); }

/// Two unit arms meeting at the origin.
inline LinearGraph lshape() {
  return LinearGraph::from_segments({Segment(pt(0, 0), pt(1, 0)), Segment(pt(0, 0), pt(0, 1))});
}

inline LinearGraph square(const Rational& side = Rational(1)) {
  const Rational z(0);
  return LinearGraph::from_segments(polyline({{z, z}, {side, z}, {side, side}, {z, side}}, true));
}

inline LinearGraph diamond() { return LinearGraph::from_segments(polyline({pt(1, 0), pt(0, 1), pt(-1, 0), pt(0, -1)}, true)); }

/// The two homeomorphic drawings of the worked subdivision example: a square with a
/// pendant chord (part 1) and a triangle with a two-edge pendant path (part 2).
inline LinearGraph worked_pair(int part) {
  if (part == 1) {
    auto segs = polyline({pt(-2, -2), pt(-2, 0), pt(2, 0), pt(2, -2)}, true);
    segs.emplace_back(pt(2, 0), pt(0, -1));
    return LinearGraph::from_segments(std::move(segs));
  }
  if (part == 2) {
    const Point2 a = pt(-2, 0);
    const Point2 b = pt(-2, -2);
    const Point2 c = pt(2, -1);
    return LinearGraph::from_segments({Segment(a, b), Segment(a, c), Segment(c, b), Segment(c, pt(4, -1)),
                                       Segment(pt(4, -1), {Rational(4), Rational(-5, 2)})});
  }
  throw DomainError("worked_pair has parts 1 and 2");
}

/// Polyline through (t_j, t_j sin(1/t_j)) = (t_j, ±t_j), t_j = 2/((2j-1)π), j = 1..n,
/// coordinates taken exactly from their double values.
inline LinearGraph sincurve_samples(std::size_t n) {
  if (n < 2) throw DomainError("sincurve-samples needs n >= 2");
  std::vector<Point2> pts;
  for (std::size_t j = 1; j <= n; ++j) {
    const double t = 2.0 / ((2.0 * static_cast<double>(j) - 1.0) * std::numbers::pi);
    pts.push_back({Rational::from_double(t), Rational::from_double(j % 2 == 1 ? t : -t)});
  }
  return LinearGraph::from_segments(polyline(pts));
}

/// Vertices of a polyline graph in path order (the graph must be a simple path).
inline std::vector<Point2> polyline_points_of(const LinearGraph& g) {
  std::size_t start = 0;
  while (start < g.vertex_count() && g.degree(start) != 1) ++start;
  if (start == g.vertex_count() || g.edge_count() + 1 != g.vertex_count()) throw DomainError("graph is not a path");
  std::vector<Point2> out{g.vertices()[start]};
  std::size_t prev_edge = g.edge_count();
  std::size_t v = start;
  while (out.size() < g.vertex_count()) {
    for (std::size_t e : g.incident(v)) {
      if (e == prev_edge) continue;
      const auto [a, b] = g.edges()[e];
      v = a == v ? b : a;
      prev_edge = e;
      break;
    }
    out.push_back(g.vertices()[v]);
  }
  return out;
}

}  // namespace lgvar::fixtures
