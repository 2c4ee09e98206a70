#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lgvar/errors.hpp"
#include "lgvar/functions.hpp"
#include "lgvar/graph.hpp"
#include "lgvar/homeo.hpp"
#include "lgvar/transport.hpp"
#include "lgvar/variation.hpp"

namespace lgvar::io {

using Json = nlohmann::json;

namespace detail {

/// DOM builder that keeps the lexeme of every floating literal as a string, so that
/// decimal coordinates can be converted to rationals exactly.
class ExactDom {
 public:
  using number_integer_t = Json::number_integer_t;
  using number_unsigned_t = Json::number_unsigned_t;
  using number_float_t = Json::number_float_t;
  using string_t = Json::string_t;
  using binary_t = Json::binary_t;

  bool null() { put(nullptr); return true; }
  bool boolean(bool v) { put(v); return true; }
  bool number_integer(number_integer_t v) { put(v); return true; }
  bool number_unsigned(number_unsigned_t v) { put(v); return true; }
  bool number_float(number_float_t, const string_t& lexeme) { put(lexeme); return true; }
  bool string(string_t& v) { put(v); return true; }
  bool binary(binary_t&) { return false; }
  bool start_object(std::size_t) { stack_.push_back(put(Json::object())); return true; }
  bool key(string_t& k) { slot_ = &(*stack_.back())[k]; return true; }
  bool end_object() { stack_.pop_back(); return true; }
  bool start_array(std::size_t) { stack_.push_back(put(Json::array())); return true; }
  bool end_array() { stack_.pop_back(); return true; }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(position) + ": " + e.what());
  }

  Json root;

 private:
  Json* put(Json v) {
    if (stack_.empty()) {
      root = std::move(v);
      return &root;
    }
    if (stack_.back()->is_array()) {
      stack_.back()->push_back(std::move(v));
      return &stack_.back()->back();
    }
    *slot_ = std::move(v);
    return slot_;
  }

  std::vector<Json*> stack_;
  Json* slot_ = nullptr;
};

}  // namespace detail

/// Parse JSON text; floating literals come back as strings holding their lexeme.
inline Json parse_json(const std::string& text) {
  detail::ExactDom dom;
  Json::sax_parse(text, &dom);
  return std::move(dom.root);
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- values ----

inline Rational rational_of(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_unsigned()) return Rational::parse(std::to_string(j.get<std::uint64_t>()));
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  throw ParseError("expected a rational, got " + j.dump());
}

inline double real_of(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return Rational::parse(j.get<std::string>()).to_double();
  throw ParseError("expected a number, got " + j.dump());
}

inline std::size_t index_of(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ParseError("expected a non-negative integer, got " + j.dump());
  }
  return j.get<std::size_t>();
}

inline const Json& array_of(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("expected an array for ") + what);
  return j;
}

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline Point2 point_of(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected a point [x, y], got " + j.dump());
  return {rational_of(j[0]), rational_of(j[1])};
}

inline std::vector<Point2> points_of(const Json& j) {
  std::vector<Point2> out;
  for (const auto& p : array_of(j, "point list")) out.push_back(point_of(p));
  return out;
}

inline Json json_of(const Rational& q) { return q.to_string(); }
inline Json json_of(const Point2& p) { return Json::array({json_of(p.x), json_of(p.y)}); }

inline Json json_of(const std::vector<Point2>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(json_of(p));
  return out;
}

inline Json json_of(const Line& l) { return {{"anchor", json_of(l.anchor())}, {"direction", json_of(l.direction())}}; }

// ---- graphs ----

struct LoadedGraph {
  std::vector<Segment> raw;  // segments in file order
  std::shared_ptr<const LinearGraph> graph;
};

/// Each segment oriented from its lexicographically smaller end, segments sorted.
inline LinearGraph canonical(const LinearGraph& g) {
  std::vector<Segment> segs;
  for (const auto& s : g.segments()) segs.push_back(s.b() < s.a() ? s.reversed() : s);
  std::sort(segs.begin(), segs.end(), [](const Segment& u, const Segment& v) {
    if (u.a() != v.a()) return u.a() < v.a();
    return u.b() < v.b();
  });
  return LinearGraph::from_segments(std::move(segs));
}

inline std::vector<Segment> segments_of(const Json& j) {
  std::vector<Segment> raw;
  for (const auto& s : array_of(member(j, "segments"), "segments")) {
    if (!s.is_array() || s.size() != 2) throw ParseError("expected a segment [[x1, y1], [x2, y2]]");
    const Point2 a = point_of(s[0]);
    const Point2 b = point_of(s[1]);
    if (a == b) throw DomainError("degenerate segment at " + s.dump());
    raw.emplace_back(a, b);
  }
  if (raw.empty()) throw ParseError("a graph file needs at least one segment");
  return raw;
}

/// Properized and canonically ordered unless `properize_on_load` is false, in which
/// case the file's segments must already be proper and are kept in file order.
inline LoadedGraph graph_of(const Json& j, bool properize_on_load = true) {
  LoadedGraph out;
  out.raw = segments_of(j);
  out.graph = std::make_shared<const LinearGraph>(properize_on_load ? canonical(properize(out.raw))
                                                                    : LinearGraph::from_segments(out.raw));
  return out;
}

inline Json graph_json(const LinearGraph& g) {
  Json segs = Json::array();
  for (const auto& s : g.segments()) segs.push_back(Json::array({json_of(s.a()), json_of(s.b())}));
  return {{"segments", segs}};
}

// ---- functions ----

namespace detail {

struct RawSpot {
  std::size_t raw;
  Rational ta;
  Rational tb;
};

/// Raw segment holding graph edge e, with the parameters of the edge ends on it.
inline RawSpot raw_spot(const std::vector<Segment>& raw, const Segment& edge) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto ta = param_of(raw[i], edge.a());
    const auto tb = param_of(raw[i], edge.b());
    if (ta && tb) return {i, *ta, *tb};
  }
  throw DomainError("graph edge lies in no file segment");
}

inline std::vector<PwlKnot> knots_of(const Json& j) {
  std::vector<PwlKnot> ks;
  for (const auto& k : array_of(j, "knot list")) {
    if (!k.is_array() || k.size() != 3) throw ParseError("expected a knot [t, re, im], got " + k.dump());
    ks.push_back({rational_of(k[0]), Complex(real_of(k[1]), real_of(k[2]))});
  }
  return ks;
}

inline void check_knots(const std::vector<PwlKnot>& ks) {
  if (ks.size() < 2 || !ks.front().t.is_zero() || ks.back().t != Rational(1)) {
    throw DomainError("knot lists must start at t = 0 and end at t = 1");
  }
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    if (!(ks[i].t < ks[i + 1].t)) throw DomainError("knot parameters must be strictly increasing");
  }
}

}  // namespace detail

/// {"type": "polyxy" | "pwl" | "kdelta", ...}. PWL knot lists and the KDelta carrier
/// refer to the segments of the graph file; they are carried over to the loaded graph.
inline FuncModel function_of(const Json& j, const LoadedGraph& g) {
  const Json& type = member(j, "type");
  if (!type.is_string()) throw ParseError("function type must be a string");
  const std::string kind = type.get<std::string>();
  if (kind == "polyxy") {
    std::vector<PolyXY::Term> terms;
    for (const auto& c : array_of(member(j, "coeffs"), "coeffs")) {
      if (!c.is_array() || c.size() != 4) throw ParseError("expected a coefficient [n, m, re, im], got " + c.dump());
      terms.push_back({static_cast<unsigned>(index_of(c[0])), static_cast<unsigned>(index_of(c[1])),
                       Complex(real_of(c[2]), real_of(c[3]))});
    }
    if (terms.empty()) throw ParseError("a polynomial needs at least one coefficient");
    return make_polyxy(std::move(terms));
  }
  if (kind == "pwl") {
    const Json& segs = array_of(member(j, "segments"), "segments");
    if (segs.size() != g.raw.size()) throw DomainError("need one knot list per file segment");
    std::vector<std::vector<PwlKnot>> raw_knots;
    for (const auto& s : segs) {
      raw_knots.push_back(detail::knots_of(s));
      detail::check_knots(raw_knots.back());
    }
    std::vector<std::vector<PwlKnot>> knots;
    for (const auto& edge : g.graph->segments()) {
      const auto spot = detail::raw_spot(g.raw, edge);
      const auto& src = raw_knots[spot.raw];
      const Rational span = spot.tb - spot.ta;
      std::vector<PwlKnot> ks{{Rational(0), lgvar::detail::pwl_value(src, spot.ta)}};
      std::vector<PwlKnot> inner;
      for (const auto& k : src) {
        const Rational u = (k.t - spot.ta) / span;
        if (u.sign() > 0 && u < Rational(1)) inner.push_back({u, k.value});
      }
      if (span.sign() < 0) std::reverse(inner.begin(), inner.end());
      ks.insert(ks.end(), inner.begin(), inner.end());
      ks.push_back({Rational(1), lgvar::detail::pwl_value(src, spot.tb)});
      knots.push_back(std::move(ks));
    }
    return make_pwl(g.graph, std::move(knots));
  }
  if (kind == "kdelta") {
    const std::size_t carrier = index_of(member(j, "carrier"));
    if (carrier >= g.raw.size()) throw DomainError("carrier index out of range");
    const Segment& s = g.raw[carrier];
    const auto e = g.graph->edge_containing(s);
    if (!e || !(g.graph->segment(*e) == s || g.graph->segment(*e) == s.reversed())) {
      throw DomainError("carrier segment is split by properization");
    }
    return make_k_delta(g.graph, *e, rational_of(member(j, "delta")));  // symmetric in t, orientation is irrelevant
  }
  throw ParseError("unknown function type '" + kind + "'");
}

/// Serialized form of a PWL, PolyXY or KDelta model, aligned with graph_json of its graph.
inline Json function_json(const FuncModel& f) {
  if (const auto* p = f.as<PolyXY>()) {
    Json coeffs = Json::array();
    for (const auto& t : p->terms) coeffs.push_back(Json::array({t.n, t.m, t.c.real(), t.c.imag()}));
    return {{"type", "polyxy"}, {"coeffs", coeffs}};
  }
  if (const auto* p = f.as<PerSegmentPWL>()) {
    Json segs = Json::array();
    for (const auto& ks : p->knots) {
      Json list = Json::array();
      for (const auto& k : ks) list.push_back(Json::array({json_of(k.t), k.value.real(), k.value.imag()}));
      segs.push_back(list);
    }
    return {{"type", "pwl"}, {"segments", segs}};
  }
  if (const auto* k = f.as<KDelta>()) return {{"type", "kdelta"}, {"carrier", k->carrier}, {"delta", json_of(k->delta)}};
  throw DomainError("only polyxy, pwl and kdelta models have a file form");
}

// ---- reports ----

inline Json diagnostic(const char* kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

inline Json vf_json(const PointList& s, const VfReport& r) {
  return {{"vf", r.value},
          {"witness_line", json_of(r.witness)},
          {"segments", s.segment_count()},
          {"pair_lines", r.pair_lines},
          {"classes", r.classes}};
}

inline Json budget_json(const SearchBudget& b) {
  return {{"restarts", b.restarts}, {"moves", b.moves}, {"cap", b.cap}, {"threads", b.threads}};
}

inline Json norm_json(const NormReport& r) {
  return {{"sup", r.sup},
          {"segment_variations", r.segment_variations},
          {"variation_sum", r.variation_sum},
          {"lg_norm", r.lg},
          {"var_lower", r.var_lower},
          {"var_upper", r.var_upper},
          {"bv_lower", r.bv_lower},
          {"bv_upper", r.bv_upper},
          {"witness", json_of(r.witness.points())},
          {"witness_vf", r.witness_vf},
          {"seed", r.seed}};
}

inline Json decomposition_json(const DecompositionReport& r, const std::vector<std::size_t>& first,
                               const std::vector<std::size_t>& second) {
  return {{"lg_norm", r.lg},
          {"lg_first", r.lg_first},
          {"lg_second", r.lg_second},
          {"first", first},
          {"second", second},
          {"lower_holds", r.lower_holds},
          {"upper_holds", r.upper_holds}};
}

inline Json certificate_json(const HomeoCertificate& c) {
  return {{"homeomorphic", true},
          {"refined_vertices", c.source.vertex_count()},
          {"refined_edges", c.source.edge_count()},
          {"source", graph_json(c.source)},
          {"target", graph_json(c.target)},
          {"vertex_map", c.vertex_map},
          {"edge_map", c.edge_map}};
}

inline Json isometry_json(const IsometryReport& r) {
  Json edges = Json::array();
  for (const auto& e : r.edges) {
    edges.push_back({{"source_edge", e.source_edge},
                     {"target_edge", e.target_edge},
                     {"source_variation", e.source_variation},
                     {"target_variation", e.target_variation}});
  }
  return {{"edges", edges},
          {"lg_source", r.lg_source},
          {"lg_target", r.lg_target},
          {"exact", r.exact},
          {"isometry_holds", r.isometry_holds},
          {"max_morphism_error", r.max_morphism_error},
          {"morphism_holds", r.morphism_holds},
          {"samples", r.samples}};
}

inline Json divergence_json(const DivergenceDemo& d, bool with_points) {
  Json out = {{"n", d.n}, {"partial_sum", d.partial_sum}};
  if (with_points) {
    Json pts = Json::array();
    for (const auto& [x, y] : d.points) pts.push_back(Json::array({x, y}));
    out["t"] = d.t;
    out["points"] = pts;
  }
  return out;
}

inline Json pulled_back_json(const PulledBackWitness& w) {
  Json z = Json::array();
  for (const auto& q : w.z) z.push_back(json_of(q));
  return {{"n", w.n},
          {"partial_sum", w.partial_sum},
          {"variation", w.variation},
          {"witness_cvar", w.witness_cvar},
          {"monotone", w.monotone},
          {"z", z}};
}

}  // namespace lgvar::io
