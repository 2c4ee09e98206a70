#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lgvar/errors.hpp"
#include "lgvar/geometry.hpp"

namespace lgvar {

using EdgeEnds = std::pair<std::size_t, std::size_t>;

namespace detail {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::size_t components() {
    std::size_t c = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) c += find(i) == i ? 1 : 0;
    return c;
  }
};

}  // namespace detail

/// A proper representation of a linear graph: segments meeting only at shared
/// endpoints, whose union is connected. Vertices are the deduplicated endpoints in
/// order of first appearance; edge i joins the endpoints of segment i.
class LinearGraph {
 public:
  /// Validates properness and connectivity; throws DomainError otherwise.
  static LinearGraph from_segments(std::vector<Segment> segments) {
    if (segments.empty()) throw DomainError("a linear graph needs at least one segment");
    LinearGraph g(std::move(segments));
    g.check_proper();
    g.check_connected();
    return g;
  }

  [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }
  [[nodiscard]] const std::vector<Point2>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<EdgeEnds>& edges() const { return edges_; }
  [[nodiscard]] std::size_t edge_count() const { return segments_.size(); }
  [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
  [[nodiscard]] const Segment& segment(std::size_t e) const { return segments_.at(e); }
  [[nodiscard]] const std::vector<std::size_t>& incident(std::size_t v) const { return incident_.at(v); }
  [[nodiscard]] std::size_t degree(std::size_t v) const { return incident_.at(v).size(); }

  [[nodiscard]] std::optional<std::size_t> vertex_index(const Point2& p) const {
    if (auto it = index_.find(p); it != index_.end()) return it->second;
    return std::nullopt;
  }

  struct Location {
    std::size_t edge;
    Rational t;
  };

  /// First edge (by index) containing p, with p's parameter on it.
  [[nodiscard]] std::optional<Location> locate(const Point2& p) const {
    for (std::size_t e = 0; e < segments_.size(); ++e) {
      if (auto t = param_of(segments_[e], p)) return Location{e, *t};
    }
    return std::nullopt;
  }
  [[nodiscard]] bool contains(const Point2& p) const { return locate(p).has_value(); }

  /// Edge whose segment contains the whole of s, if any.
  [[nodiscard]] std::optional<std::size_t> edge_containing(const Segment& s) const {
    for (std::size_t e = 0; e < segments_.size(); ++e) {
      if (on_segment(s.a(), segments_[e]) && on_segment(s.b(), segments_[e])) return e;
    }
    return std::nullopt;
  }

  /// Number of connected components of the subgraph formed by the given edges.
  [[nodiscard]] std::size_t components_of(const std::vector<std::size_t>& edge_subset) const {
    detail::DisjointSets ds(vertices_.size());
    std::vector<bool> touched(vertices_.size(), false);
    for (std::size_t e : edge_subset) {
      ds.unite(edges_.at(e).first, edges_.at(e).second);
      touched[edges_[e].first] = touched[edges_[e].second] = true;
    }
    std::size_t c = 0;
    for (std::size_t v = 0; v < vertices_.size(); ++v) c += (touched[v] && ds.find(v) == v) ? 1 : 0;
    return c;
  }

 private:
  explicit LinearGraph(std::vector<Segment> segments) : segments_(std::move(segments)) {
    auto intern = [&](const Point2& p) {
      auto [it, inserted] = index_.try_emplace(p, vertices_.size());
      if (inserted) {
        vertices_.push_back(p);
        incident_.emplace_back();
      }
      return it->second;
    };
    for (std::size_t e = 0; e < segments_.size(); ++e) {
      const std::size_t u = intern(segments_[e].a());
      const std::size_t v = intern(segments_[e].b());
      edges_.emplace_back(u, v);
      incident_[u].push_back(e);
      incident_[v].push_back(e);
    }
  }

  void check_proper() const {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      for (std::size_t j = i + 1; j < segments_.size(); ++j) {
        const Intersection x = segment_intersection(segments_[i], segments_[j]);
        if (std::holds_alternative<OverlapIntersection>(x)) {
          throw DomainError("representation is not proper: segments " + std::to_string(i) + " and " +
                            std::to_string(j) + " overlap");
        }
        if (const auto* p = std::get_if<PointIntersection>(&x)) {
          const bool shared_i = p->point == segments_[i].a() || p->point == segments_[i].b();
          const bool shared_j = p->point == segments_[j].a() || p->point == segments_[j].b();
          if (!shared_i || !shared_j) {
            throw DomainError("representation is not proper: segments " + std::to_string(i) + " and " +
                              std::to_string(j) + " meet away from a common endpoint");
          }
        }
      }
    }
  }

  void check_connected() const {
    std::vector<std::size_t> all(segments_.size());
    std::iota(all.begin(), all.end(), 0);
    if (const std::size_t c = components_of(all); c != 1) {
      throw DomainError("union is disconnected: " + std::to_string(c) + " components");
    }
  }

  std::vector<Segment> segments_;
  std::vector<Point2> vertices_;
  std::vector<EdgeEnds> edges_;
  std::vector<std::vector<std::size_t>> incident_;
  std::map<Point2, std::size_t> index_;
};

namespace detail {

// Supporting line of a segment in canonical form: y = slope*x + offset, or x = offset.
struct LineKey {
  bool vertical;
  Rational slope;
  Rational offset;
  friend bool operator<(const LineKey& a, const LineKey& b) {
    return std::tie(a.vertical, a.slope, a.offset) < std::tie(b.vertical, b.slope, b.offset);
  }
};

inline LineKey line_key(const Segment& s) {
  const Point2 d = s.direction();
  if (d.x.is_zero()) return {true, Rational(0), s.a().x};
  const Rational slope = d.y / d.x;
  return {false, slope, s.a().y - slope * s.a().x};
}

inline const Rational& axis_coord(const LineKey& k, const Point2& p) { return k.vertical ? p.y : p.x; }

}  // namespace detail

/// Replace an arbitrary finite union of segments by a proper representation of the
/// same point set: collinear overlaps are merged, then everything is split at every
/// original endpoint and every crossing.
inline LinearGraph properize(const std::vector<Segment>& raw) {
  if (raw.empty()) throw DomainError("empty segment list");

  std::map<detail::LineKey, std::size_t> group_of;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<detail::LineKey> group_keys;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto key = detail::line_key(raw[i]);
    auto [it, inserted] = group_of.try_emplace(key, groups.size());
    if (inserted) {
      groups.emplace_back();
      group_keys.push_back(key);
    }
    groups[it->second].push_back(i);
  }

  struct Merged {
    Segment seg;
    std::size_t group;
  };
  std::vector<Merged> merged;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& key = group_keys[g];
    std::vector<std::pair<Point2, Point2>> spans;  // endpoints ordered along the axis
    for (std::size_t i : groups[g]) {
      Point2 lo = raw[i].a();
      Point2 hi = raw[i].b();
      if (detail::axis_coord(key, hi) < detail::axis_coord(key, lo)) std::swap(lo, hi);
      spans.emplace_back(lo, hi);
    }
    std::sort(spans.begin(), spans.end(), [&](const auto& l, const auto& r) {
      return detail::axis_coord(key, l.first) < detail::axis_coord(key, r.first);
    });
    const Segment& first = raw[groups[g].front()];
    const bool increasing = detail::axis_coord(key, first.a()) < detail::axis_coord(key, first.b());
    std::vector<std::pair<Point2, Point2>> unions;
    for (const auto& span : spans) {
      if (!unions.empty() &&
          !(detail::axis_coord(key, unions.back().second) < detail::axis_coord(key, span.first))) {
        if (detail::axis_coord(key, unions.back().second) < detail::axis_coord(key, span.second)) {
          unions.back().second = span.second;
        }
      } else {
        unions.push_back(span);
      }
    }
    for (const auto& [lo, hi] : unions) {
      merged.push_back({increasing ? Segment(lo, hi) : Segment(hi, lo), g});
    }
  }

  std::vector<Segment> pieces;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const Segment& m = merged[i].seg;
    std::vector<Rational> cuts{Rational(0), Rational(1)};
    for (std::size_t r : groups[merged[i].group]) {
      for (const Point2* p : {&raw[r].a(), &raw[r].b()}) {
        if (auto t = param_of(m, *p)) cuts.push_back(*t);
      }
    }
    for (std::size_t j = 0; j < merged.size(); ++j) {
      if (j == i) continue;
      const Intersection x = segment_intersection(m, merged[j].seg);
      if (const auto* p = std::get_if<PointIntersection>(&x)) {
        cuts.push_back(*param_of(m, p->point));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      pieces.emplace_back(param_point(m, cuts[k]), param_point(m, cuts[k + 1]));
    }
  }
  return LinearGraph::from_segments(std::move(pieces));
}

/// Split edge `edge` at parameter t; the two halves take its place in the edge order.
inline LinearGraph subdivide_edge(const LinearGraph& g, std::size_t edge, const Rational& t) {
  if (edge >= g.edge_count()) throw DomainError("edge index out of range");
  if (t.sign() <= 0 || !(t < Rational(1))) throw DomainError("subdivision parameter must lie in (0, 1)");
  std::vector<Segment> segs;
  segs.reserve(g.edge_count() + 1);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Segment& s = g.segment(e);
    if (e == edge) {
      const Point2 w = param_point(s, t);
      segs.emplace_back(s.a(), w);
      segs.emplace_back(w, s.b());
    } else {
      segs.push_back(s);
    }
  }
  return LinearGraph::from_segments(std::move(segs));
}

/// Abstract multigraph produced by smoothing. Loops and parallel edges are kept.
/// A pure cycle smooths to the token {1 vertex, one loop, cycle = true}.
struct Multigraph {
  std::size_t vertex_count = 0;
  std::vector<EdgeEnds> edges;
  bool cycle = false;

  static Multigraph cycle_token() { return {1, {{0, 0}}, true}; }

  [[nodiscard]] std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(vertex_count, 0);
    for (const auto& [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    return deg;
  }

  friend bool operator==(const Multigraph& a, const Multigraph& b) {
    auto normal = [](const Multigraph& m) {
      std::vector<EdgeEnds> es;
      for (auto [u, v] : m.edges) es.emplace_back(std::min(u, v), std::max(u, v));
      std::sort(es.begin(), es.end());
      return es;
    };
    return a.vertex_count == b.vertex_count && a.cycle == b.cycle && normal(a) == normal(b);
  }
};

/// A maximal path whose interior vertices all have degree 2.
struct Chain {
  std::vector<std::size_t> vertices;  // graph vertex indices, size = edges.size() + 1
  std::vector<std::size_t> edges;

  [[nodiscard]] Chain reversed() const {
    return {{vertices.rbegin(), vertices.rend()}, {edges.rbegin(), edges.rend()}};
  }
};

struct Smoothing {
  Multigraph graph;
  std::vector<std::size_t> kept;  // graph vertex realising each multigraph vertex
  std::vector<Chain> chains;      // chains[k] runs from kept[graph.edges[k].first] to kept[...second]
};

inline Smoothing smooth_with_chains(const LinearGraph& g) {
  Smoothing out;
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> multi_index(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    if (g.degree(v) != 2) {
      multi_index[v] = out.kept.size();
      out.kept.push_back(v);
    }
  }

  auto other_end = [&](std::size_t e, std::size_t v) {
    return g.edges()[e].first == v ? g.edges()[e].second : g.edges()[e].first;
  };
  std::vector<bool> used(g.edge_count(), false);
  auto walk = [&](std::size_t start, std::size_t first_edge) {
    Chain c;
    c.vertices.push_back(start);
    std::size_t e = first_edge;
    std::size_t v = start;
    while (true) {
      used[e] = true;
      c.edges.push_back(e);
      v = other_end(e, v);
      c.vertices.push_back(v);
      if (g.degree(v) != 2 || v == start) break;
      const auto& inc = g.incident(v);
      e = inc[0] == e ? inc[1] : inc[0];
    }
    return c;
  };

  if (out.kept.empty()) {
    // Every vertex has degree 2: a single closed polygon.
    out.graph = Multigraph::cycle_token();
    out.kept = {0};
    out.chains.push_back(walk(0, g.incident(0).front()));
    return out;
  }

  out.graph.vertex_count = out.kept.size();
  for (std::size_t u : out.kept) {
    for (std::size_t e : g.incident(u)) {
      if (used[e]) continue;
      Chain c = walk(u, e);
      out.graph.edges.emplace_back(multi_index[c.vertices.front()], multi_index[c.vertices.back()]);
      out.chains.push_back(std::move(c));
    }
  }
  return out;
}

/// Suppress every degree-2 vertex.
inline Multigraph smooth(const LinearGraph& g) { return smooth_with_chains(g).graph; }

/// Vertex bijection a -> b preserving edge multiplicities and loops, if one exists.
/// Backtracking with degree and loop-count pruning; deterministic.
inline std::optional<std::vector<std::size_t>> multigraph_isomorphic(const Multigraph& a, const Multigraph& b) {
  if (a.cycle || b.cycle) {
    if (a.cycle && b.cycle) return std::vector<std::size_t>{0};
    return std::nullopt;
  }
  if (a.vertex_count != b.vertex_count || a.edges.size() != b.edges.size()) return std::nullopt;
  const std::size_t n = a.vertex_count;

  auto multiplicities = [n](const Multigraph& m) {
    std::vector<std::vector<std::size_t>> mult(n, std::vector<std::size_t>(n, 0));
    for (auto [u, v] : m.edges) {
      ++mult[u][v];
      if (u != v) ++mult[v][u];
    }
    return mult;
  };
  const auto ma = multiplicities(a);
  const auto mb = multiplicities(b);
  const auto da = a.degrees();
  const auto db = b.degrees();
  {
    auto sa = da;
    auto sb = db;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }

  // Order a's vertices so each one (after the first of its component) has an ordered neighbour.
  std::vector<std::size_t> order;
  std::vector<bool> placed(n, false);
  while (order.size() < n) {
    std::size_t best = n;
    std::size_t best_links = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (placed[v]) continue;
      std::size_t links = 0;
      for (std::size_t w : order) links += ma[v][w];
      if (best == n || links > best_links || (links == best_links && da[v] > da[best])) {
        best = v;
        best_links = links;
      }
    }
    placed[best] = true;
    order.push_back(best);
  }

  std::vector<std::size_t> image(n, n);
  std::vector<bool> taken(n, false);
  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == n) return true;
    const std::size_t u = order[depth];
    for (std::size_t w = 0; w < n; ++w) {
      if (taken[w] || db[w] != da[u] || mb[w][w] != ma[u][u]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < depth && ok; ++k) {
        const std::size_t x = order[k];
        ok = ma[u][x] == mb[w][image[x]];
      }
      if (!ok) continue;
      image[u] = w;
      taken[w] = true;
      if (self(self, depth + 1)) return true;
      taken[w] = false;
      image[u] = n;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return image;
}

/// Isomorphic subdivisions of two linear graphs together with the isomorphism.
struct HomeoCertificate {
  LinearGraph source;
  LinearGraph target;
  std::vector<std::size_t> vertex_map;  // source vertex -> target vertex
  std::vector<std::size_t> edge_map;    // source edge -> target edge
};

/// True when both maps are bijections and every source edge {u, v} goes to the
/// target edge {vertex_map[u], vertex_map[v]}.
inline bool certificate_is_valid(const HomeoCertificate& c) {
  const auto& s = c.source;
  const auto& t = c.target;
  if (s.vertex_count() != t.vertex_count() || s.edge_count() != t.edge_count()) return false;
  if (c.vertex_map.size() != s.vertex_count() || c.edge_map.size() != s.edge_count()) return false;
  std::vector<bool> hit_v(t.vertex_count(), false);
  for (std::size_t w : c.vertex_map) {
    if (w >= t.vertex_count() || hit_v[w]) return false;
    hit_v[w] = true;
  }
  std::vector<bool> hit_e(t.edge_count(), false);
  for (std::size_t e = 0; e < s.edge_count(); ++e) {
    const std::size_t f = c.edge_map[e];
    if (f >= t.edge_count() || hit_e[f]) return false;
    hit_e[f] = true;
    const auto [u, v] = s.edges()[e];
    const auto [x, y] = t.edges()[f];
    const std::size_t mu = c.vertex_map[u];
    const std::size_t mv = c.vertex_map[v];
    if (!((mu == x && mv == y) || (mu == y && mv == x))) return false;
  }
  return true;
}

namespace detail {

// Points along a chain after splitting it into `pieces` segments: the first
// (pieces mod p) segments get one extra piece, each split at equal fractions.
inline std::vector<Point2> refine_chain(const LinearGraph& g, const Chain& c, std::size_t pieces) {
  const std::size_t p = c.edges.size();
  const std::size_t base = pieces / p;
  const std::size_t extra = pieces % p;
  std::vector<Point2> pts{g.vertices()[c.vertices.front()]};
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t count = base + (j < extra ? 1 : 0);
    const Segment along(g.vertices()[c.vertices[j]], g.vertices()[c.vertices[j + 1]]);
    for (std::size_t i = 1; i <= count; ++i) {
      pts.push_back(i == count ? along.b()
                               : param_point(along, Rational(static_cast<long>(i), static_cast<long>(count))));
    }
  }
  return pts;
}

}  // namespace detail

/// Decide graph homeomorphism by comparing smoothed multigraphs; on success build
/// common refinements (matched chains split to the same number of pieces).
inline std::optional<HomeoCertificate> graph_homeomorphic(const LinearGraph& sigma, const LinearGraph& tau) {
  const Smoothing a = smooth_with_chains(sigma);
  const Smoothing b = smooth_with_chains(tau);
  if (a.graph.cycle != b.graph.cycle) return std::nullopt;

  std::vector<std::pair<Chain, Chain>> matched;
  if (a.graph.cycle) {
    matched.emplace_back(a.chains.front(), b.chains.front());
  } else {
    const auto h = multigraph_isomorphic(a.graph, b.graph);
    if (!h) return std::nullopt;
    std::vector<bool> used(b.graph.edges.size(), false);
    for (std::size_t k = 0; k < a.graph.edges.size(); ++k) {
      const auto [u, v] = a.graph.edges[k];
      const std::size_t hu = (*h)[u];
      const std::size_t hv = (*h)[v];
      bool found = false;
      for (std::size_t k2 = 0; k2 < b.graph.edges.size() && !found; ++k2) {
        if (used[k2]) continue;
        const auto [x, y] = b.graph.edges[k2];
        if (x == hu && y == hv) {
          matched.emplace_back(a.chains[k], b.chains[k2]);
        } else if (x == hv && y == hu) {
          matched.emplace_back(a.chains[k], b.chains[k2].reversed());
        } else {
          continue;
        }
        used[k2] = true;
        found = true;
      }
      if (!found) throw std::logic_error("multigraph isomorphism does not preserve edges");
    }
  }

  std::vector<Segment> src_segs;
  std::vector<Segment> dst_segs;
  std::vector<std::pair<Point2, Point2>> point_pairs;
  for (const auto& [ca, cb] : matched) {
    const std::size_t pieces = std::max(ca.edges.size(), cb.edges.size());
    const auto pa = detail::refine_chain(sigma, ca, pieces);
    const auto pb = detail::refine_chain(tau, cb, pieces);
    for (std::size_t i = 0; i < pieces; ++i) {
      src_segs.emplace_back(pa[i], pa[i + 1]);
      dst_segs.emplace_back(pb[i], pb[i + 1]);
    }
    for (std::size_t i = 0; i <= pieces; ++i) point_pairs.emplace_back(pa[i], pb[i]);
  }

  HomeoCertificate cert{LinearGraph::from_segments(std::move(src_segs)),
                        LinearGraph::from_segments(std::move(dst_segs)), {}, {}};
  const std::size_t n = cert.source.vertex_count();
  cert.vertex_map.assign(n, n);
  for (const auto& [p, q] : point_pairs) {
    const std::size_t u = *cert.source.vertex_index(p);
    const std::size_t w = *cert.target.vertex_index(q);
    if (cert.vertex_map[u] != n && cert.vertex_map[u] != w) {
      throw std::logic_error("inconsistent vertex correspondence in refinement");
    }
    cert.vertex_map[u] = w;
  }
  cert.edge_map.resize(cert.source.edge_count());
  std::iota(cert.edge_map.begin(), cert.edge_map.end(), 0);
  if (!certificate_is_valid(cert)) throw std::logic_error("refinements are not isomorphic");
  return cert;
}

/// Permutation of edge indices whose every prefix induces a connected subgraph.
struct EdgeOrdering {
  std::vector<std::size_t> order;
  friend bool operator==(const EdgeOrdering&, const EdgeOrdering&) = default;
};

/// Grow from edge 0, always taking the lowest-index unused edge touching the grown part.
inline EdgeOrdering edge_by_edge(const LinearGraph& g) {
  const std::size_t m = g.edge_count();
  EdgeOrdering out;
  std::vector<bool> used(m, false);
  std::vector<bool> touched(g.vertex_count(), false);
  while (out.order.size() < m) {
    std::size_t pick = m;
    for (std::size_t e = 0; e < m && pick == m; ++e) {
      if (used[e]) continue;
      const auto [u, v] = g.edges()[e];
      if (out.order.empty() || touched[u] || touched[v]) pick = e;
    }
    if (pick == m) throw DomainError("graph is disconnected");
    used[pick] = true;
    touched[g.edges()[pick].first] = touched[g.edges()[pick].second] = true;
    out.order.push_back(pick);
  }
  return out;
}

inline bool prefixes_connected(const LinearGraph& g, const EdgeOrdering& ord) {
  std::vector<bool> touched(g.vertex_count(), false);
  for (std::size_t k = 0; k < ord.order.size(); ++k) {
    const auto [u, v] = g.edges().at(ord.order[k]);
    if (k > 0 && !touched[u] && !touched[v]) return false;
    touched[u] = touched[v] = true;
  }
  return true;
}

/// Edge-by-edge decomposition of the refined source and its image in the refined target.
inline std::pair<EdgeOrdering, EdgeOrdering> matched_decompositions(const HomeoCertificate& cert) {
  EdgeOrdering src = edge_by_edge(cert.source);
  EdgeOrdering dst;
  dst.order.reserve(src.order.size());
  for (std::size_t e : src.order) dst.order.push_back(cert.edge_map.at(e));
  if (!prefixes_connected(cert.target, dst)) {
    throw std::logic_error("image of an edge-by-edge decomposition is not connected");
  }
  return {std::move(src), std::move(dst)};
}

}  // namespace lgvar
