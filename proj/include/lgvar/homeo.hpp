#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lgvar/errors.hpp"
#include "lgvar/geometry.hpp"
#include "lgvar/graph.hpp"

namespace lgvar {

/// Piecewise-affine homeomorphism between two refined linear graphs: maps[e]
/// sends source edge e affinely onto target edge edge_map[e].
struct Homeo {
  LinearGraph source;
  LinearGraph target;
  std::vector<AffineSegMap> maps;
  std::vector<std::size_t> edge_map;
  std::vector<std::size_t> inverse_edge_map;
};

/// Follow an edge-by-edge decomposition: the first edge is oriented by the
/// certificate's vertex bijection, every later edge extends the map already fixed
/// at a shared vertex.
inline Homeo build_homeo(const HomeoCertificate& cert) {
  if (!certificate_is_valid(cert)) throw std::logic_error("invalid homeomorphism certificate");
  const auto [order, image] = matched_decompositions(cert);
  const LinearGraph& s = cert.source;
  const LinearGraph& t = cert.target;

  const std::size_t n = s.vertex_count();
  std::vector<std::optional<std::size_t>> fixed(n);
  std::vector<std::optional<AffineSegMap>> maps(s.edge_count());

  for (std::size_t k = 0; k < order.order.size(); ++k) {
    const std::size_t e = order.order[k];
    const std::size_t f = image.order[k];
    const auto [u, v] = s.edges()[e];
    const auto [x, y] = t.edges()[f];
    Orientation o = Orientation::Forward;
    if (k == 0) {
      o = cert.vertex_map[u] == x ? Orientation::Forward : Orientation::Reversed;
    } else if (fixed[u]) {
      o = *fixed[u] == x ? Orientation::Forward : Orientation::Reversed;
    } else if (fixed[v]) {
      o = *fixed[v] == y ? Orientation::Forward : Orientation::Reversed;
    } else {
      throw std::logic_error("edge ordering is not edge-by-edge");
    }
    const std::size_t image_u = o == Orientation::Forward ? x : y;
    const std::size_t image_v = o == Orientation::Forward ? y : x;
    for (auto [w, img] : {std::pair{u, image_u}, std::pair{v, image_v}}) {
      if (fixed[w] && *fixed[w] != img) throw std::logic_error("affine extensions disagree at a shared vertex");
      fixed[w] = img;
    }
    maps[e] = AffineSegMap{s.segment(e), t.segment(f), o};
  }

  Homeo h{s, t, {}, cert.edge_map, std::vector<std::size_t>(t.edge_count())};
  for (std::size_t e = 0; e < s.edge_count(); ++e) {
    h.maps.push_back(*maps[e]);
    h.inverse_edge_map[cert.edge_map[e]] = e;
  }
  for (std::size_t w = 0; w < n; ++w) {
    if (*fixed[w] != cert.vertex_map[w]) throw std::logic_error("homeomorphism contradicts the vertex bijection");
  }
  // Exact vertex consistency: every incident map sends a vertex to the same point.
  for (std::size_t w = 0; w < n; ++w) {
    const Point2& expected = t.vertices()[cert.vertex_map[w]];
    for (std::size_t e : s.incident(w)) {
      if (affine_map(h.maps[e], s.vertices()[w]) != expected) {
        throw std::logic_error("affine maps disagree at a vertex");
      }
    }
  }
  return h;
}

inline Point2 apply(const Homeo& h, const Point2& p) {
  const auto loc = h.source.locate(p);
  if (!loc) throw DomainError("point is not on the source graph");
  return param_point(h.target.segment(h.edge_map[loc->edge]), h.maps[loc->edge].map_param(loc->t));
}

inline Point2 apply_inverse(const Homeo& h, const Point2& q) {
  const auto loc = h.target.locate(q);
  if (!loc) throw DomainError("point is not on the target graph");
  const std::size_t e = h.inverse_edge_map[loc->edge];
  return param_point(h.source.segment(e), h.maps[e].map_param(loc->t));
}

inline Homeo inverse(const Homeo& h) {
  Homeo inv{h.target, h.source, {}, h.inverse_edge_map, h.edge_map};
  inv.maps.reserve(h.maps.size());
  for (std::size_t f = 0; f < h.target.edge_count(); ++f) inv.maps.push_back(h.maps[h.inverse_edge_map[f]].inverse());
  return inv;
}

}  // namespace lgvar
