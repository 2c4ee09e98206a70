#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "lgvar/lgvar.hpp"

namespace testing_support {

using lgvar::LinearGraph;
using lgvar::Point2;
using lgvar::Rational;
using lgvar::Segment;

inline Point2 P(long x, long y) { return {Rational(x), Rational(y)}; }
inline Point2 Pq(const char* x, const char* y) { return {Rational::parse(x), Rational::parse(y)}; }

inline std::shared_ptr<const LinearGraph> share(LinearGraph g) {
  return std::make_shared<const LinearGraph>(std::move(g));
}

inline lgvar::FuncPtr share(lgvar::FuncModel f) { return std::make_shared<const lgvar::FuncModel>(std::move(f)); }

/// Small-integer random source with a fixed seed per test.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  Point2 point(long lo, long hi) { return P(integer(lo, hi), integer(lo, hi)); }
  Rational fraction(long den) { return Rational(integer(1, den - 1), den); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Integer point list of the given length, consecutive points distinct.
inline std::vector<Point2> random_list(Gen& g, std::size_t len, long range = 5) {
  std::vector<Point2> pts{g.point(-range, range)};
  while (pts.size() < len) {
    Point2 p = g.point(-range, range);
    if (p != pts.back()) pts.push_back(p);
  }
  return pts;
}

/// Connected linear graph with exactly m edges, grown from integer points.
inline LinearGraph random_graph(Gen& g, std::size_t m, long range = 4) {
  while (true) {
    std::vector<Segment> segs;
    std::vector<Point2> anchors{g.point(-range, range)};
    while (segs.size() < m) {
      const Point2 from = anchors[g.index(anchors.size())];
      const Point2 to = g.point(-range, range);
      if (to == from) continue;
      std::vector<Segment> trial = segs;
      trial.emplace_back(from, to);
      try {
        // Keep the new segment only when it does not disturb existing edges.
        const LinearGraph attempt = LinearGraph::from_segments(trial);
        segs = std::move(trial);
        anchors.push_back(to);
      } catch (const lgvar::DomainError&) {
      }
    }
    return LinearGraph::from_segments(segs);
  }
}

/// Random piecewise-linear function: shared values at vertices, a few interior knots per edge.
inline lgvar::FuncModel random_pwl(Gen& g, std::shared_ptr<const LinearGraph> graph, std::size_t max_inner = 3) {
  std::vector<lgvar::Complex> at_vertex;
  for (std::size_t v = 0; v < graph->vertex_count(); ++v) at_vertex.emplace_back(g.integer(-9, 9) / 4.0, g.integer(-9, 9) / 4.0);
  std::vector<std::vector<lgvar::PwlKnot>> knots;
  for (std::size_t e = 0; e < graph->edge_count(); ++e) {
    const auto [u, v] = graph->edges()[e];
    std::vector<Rational> ts;
    const std::size_t inner = static_cast<std::size_t>(g.integer(0, static_cast<long>(max_inner)));
    for (std::size_t i = 0; i < inner; ++i) ts.push_back(g.fraction(64));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<lgvar::PwlKnot> ks{{Rational(0), at_vertex[u]}};
    for (auto& t : ts) ks.push_back({t, {g.real(-3, 3), g.real(-3, 3)}});
    ks.push_back({Rational(1), at_vertex[v]});
    knots.push_back(std::move(ks));
  }
  return lgvar::make_pwl(std::move(graph), std::move(knots));
}

/// Random polynomial of low degree with small coefficients.
inline lgvar::FuncModel random_poly(Gen& g, unsigned degree = 2) {
  std::vector<lgvar::PolyXY::Term> terms;
  for (unsigned n = 0; n <= degree; ++n) {
    for (unsigned m = 0; n + m <= degree; ++m) terms.push_back({n, m, {g.real(-1, 1), g.real(-1, 1)}});
  }
  return lgvar::make_polyxy(std::move(terms));
}

/// Split a random edge at a random rational parameter, `times` times.
inline LinearGraph random_refinement(Gen& g, LinearGraph sigma, std::size_t times) {
  for (std::size_t i = 0; i < times; ++i) sigma = lgvar::subdivide_edge(sigma, g.index(sigma.edge_count()), g.fraction(16));
  return sigma;
}

/// Same abstract graph drawn with moved vertices (kept proper), then randomly subdivided.
inline LinearGraph random_redrawing(Gen& g, const LinearGraph& sigma) {
  while (true) {
    std::vector<Point2> moved;
    for (const auto& v : sigma.vertices()) {
      moved.push_back({v.x * Rational(3) + Rational(g.integer(-2, 2)), v.y * Rational(3) + Rational(g.integer(-2, 2))});
    }
    std::vector<Segment> segs;
    try {
      for (const auto& [u, w] : sigma.edges()) segs.emplace_back(moved[u], moved[w]);
      auto drawn = LinearGraph::from_segments(std::move(segs));
      if (drawn.vertex_count() != sigma.vertex_count()) continue;
      return random_refinement(g, std::move(drawn), static_cast<std::size_t>(g.integer(0, 3)));
    } catch (const lgvar::DomainError&) {
    }
  }
}

/// Edge subset grown from a random edge whose complement is also connected, if one is found.
inline std::optional<std::vector<std::size_t>> random_split(Gen& g, const LinearGraph& sigma) {
  const std::size_t m = sigma.edge_count();
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<bool> in(m, false);
    std::vector<bool> touched(sigma.vertex_count(), false);
    std::vector<std::size_t> part;
    const std::size_t target = 1 + g.index(m - 1);
    std::size_t first = g.index(m);
    in[first] = true;
    part.push_back(first);
    touched[sigma.edges()[first].first] = touched[sigma.edges()[first].second] = true;
    while (part.size() < target) {
      std::vector<std::size_t> frontier;
      for (std::size_t e = 0; e < m; ++e) {
        if (!in[e] && (touched[sigma.edges()[e].first] || touched[sigma.edges()[e].second])) frontier.push_back(e);
      }
      const std::size_t e = frontier[g.index(frontier.size())];
      in[e] = true;
      part.push_back(e);
      touched[sigma.edges()[e].first] = touched[sigma.edges()[e].second] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t e = 0; e < m; ++e) {
      if (!in[e]) rest.push_back(e);
    }
    if (sigma.components_of(rest) == 1) return part;
  }
  return std::nullopt;
}

}  // namespace testing_support
