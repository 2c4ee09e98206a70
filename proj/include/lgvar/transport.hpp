#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "lgvar/errors.hpp"
#include "lgvar/fixtures.hpp"
#include "lgvar/functions.hpp"
#include "lgvar/homeo.hpp"
#include "lgvar/variation.hpp"

namespace lgvar {

struct TransportResult {
  FuncPtr lazy;                         // f ∘ φ⁻¹ on φ.target
  std::optional<FuncModel> materialized;  // explicit piecewise-linear model on φ.target, when f has breakpoints
};

namespace detail {

/// Every edge of `inner` lies in `outer` and vice versa (same point set, compatible splits).
inline bool covers(const LinearGraph& outer, const LinearGraph& inner) {
  try {
    for (const auto& s : inner.segments()) pieces_along(outer, s);
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

inline void check_attached(const FuncModel& f, const LinearGraph& source) {
  if (const auto* p = f.as<Pointwise>()) {
    check_attached(*p->lhs, source);
    check_attached(*p->rhs, source);
    return;
  }
  const LinearGraph* g = attached_graph(f);
  if (g != nullptr && (!covers(*g, source) || !covers(source, *g))) {
    throw DomainError("function is not defined on the source graph of the homeomorphism");
  }
}

}  // namespace detail

/// Φ(f) = f ∘ φ⁻¹.
inline TransportResult transport(FuncPtr f, std::shared_ptr<const Homeo> phi) {
  detail::check_attached(*f, phi->source);
  TransportResult out;
  out.lazy = std::make_shared<const FuncModel>(Transported{f, phi});

  const LinearGraph& src = phi->source;
  std::vector<std::vector<PwlKnot>> knots(phi->target.edge_count());
  for (std::size_t e = 0; e < src.edge_count(); ++e) {
    const auto ts = breakpoints_on(*f, src.segment(e));
    if (!ts) return out;
    const AffineSegMap& m = phi->maps[e];
    auto& dst = knots[phi->edge_map[e]];
    for (const Rational& t : *ts) dst.push_back({m.map_param(t), evaluate(*f, param_point(src.segment(e), t))});
    if (m.orientation == Orientation::Reversed) std::reverse(dst.begin(), dst.end());
  }
  out.materialized = make_pwl(std::make_shared<const LinearGraph>(phi->target), std::move(knots));
  return out;
}

struct IsometryReport {
  struct EdgePair {
    std::size_t source_edge;
    std::size_t target_edge;
    double source_variation;
    double target_variation;
  };
  std::vector<EdgePair> edges;
  double lg_source = 0.0;
  double lg_target = 0.0;
  bool exact = false;  // equality demanded bit for bit
  bool isometry_holds = false;
  double max_morphism_error = 0.0;
  bool morphism_holds = false;
  std::size_t samples = 0;
};

namespace detail {

inline bool exactly_computable(const FuncModel& f) {
  if (f.as<PerSegmentPWL>() || f.as<KDelta>()) return true;
  if (const auto* t = f.as<Transported>()) return exactly_computable(*t->base);
  return false;
}

}  // namespace detail

/// Compare per-edge variations and LG norms of f and Φ(f); check Φ(f + g) and Φ(f g)
/// against Φ(f) + Φ(g) and Φ(f) Φ(g) at seeded sample points of φ.target.
inline IsometryReport verify_isometry(const FuncPtr& f, const std::shared_ptr<const Homeo>& phi, FuncPtr companion = nullptr,
                                      std::size_t samples = 100, std::uint64_t seed = 0, const Tolerances& tol = {}) {
  if (!companion) companion = std::make_shared<const FuncModel>(make_polyxy({{1, 0, 1.0}, {0, 1, Complex(0.0, 1.0)}}));
  const auto tf = transport(f, phi);
  const FuncModel& image = *tf.lazy;

  IsometryReport r;
  r.exact = detail::exactly_computable(*f);
  const double tolerance = r.exact ? 0.0 : 1e-9;
  bool ok = true;
  for (std::size_t e = 0; e < phi->source.edge_count(); ++e) {
    const std::size_t target_edge = phi->edge_map[e];
    const double a = segment_variation(*f, phi->source.segment(e), tol);
    const double b = segment_variation(image, phi->target.segment(target_edge), tol);
    ok = ok && std::fabs(a - b) <= tolerance * std::max(1.0, std::fabs(a));
    r.edges.push_back({e, target_edge, a, b});
  }
  r.lg_source = lg_value(*f, phi->source, tol);
  r.lg_target = lg_value(image, phi->target, tol);
  r.isometry_holds = ok && std::fabs(r.lg_source - r.lg_target) <= tolerance * std::max(1.0, std::fabs(r.lg_source));

  const FuncPtr fg_sum = std::make_shared<const FuncModel>(sum(f, companion));
  const FuncPtr fg_product = std::make_shared<const FuncModel>(product(f, companion));
  const auto t_sum = transport(fg_sum, phi);
  const auto t_product = transport(fg_product, phi);
  const auto t_companion = transport(companion, phi);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_edge(0, phi->target.edge_count() - 1);
  std::uniform_int_distribution<long> pick_t(0, 1L << 20);
  for (std::size_t i = 0; i < samples; ++i) {
    const Point2 q = param_point(phi->target.segment(pick_edge(rng)), Rational(pick_t(rng), 1L << 20));
    const Complex fq = evaluate(image, q);
    const Complex gq = evaluate(*t_companion.lazy, q);
    const double e1 = std::abs(evaluate(*t_sum.lazy, q) - (fq + gq));
    const double e2 = std::abs(evaluate(*t_product.lazy, q) - fq * gq);
    r.max_morphism_error = std::max({r.max_morphism_error, e1, e2});
  }
  r.samples = samples;
  r.morphism_holds = r.max_morphism_error <= 1e-12;
  return r;
}

struct PulledBackWitness {
  std::size_t n = 0;
  double partial_sum = 0.0;          // divergence_demo(n).partial_sum
  double variation = 0.0;            // var(g ∘ h, [0, 1])
  double witness_cvar = 0.0;         // cvar(g ∘ h, [z_1, ..., z_n])
  std::vector<Rational> z;           // first coordinates of z_j = h⁻¹(x_j)
  bool monotone = false;             // z_j strictly monotone along [0, 1]
};

/// g(x, y) = y on the polyline through x_j = (t_j, t_j sin(1/t_j)), j = 1..n, pulled back
/// to [0, 1] through a piecewise-affine homeomorphism h: [0, 1] -> polyline.
inline PulledBackWitness pulled_back_witness(std::size_t n) {
  const LinearGraph sigma = fixtures::unit_segment();
  const LinearGraph tau = fixtures::sincurve_samples(n);
  const auto cert = graph_homeomorphic(sigma, tau);
  if (!cert) throw std::logic_error("segment and sampled curve should be homeomorphic");
  const auto h = std::make_shared<const Homeo>(build_homeo(*cert));
  const auto back = std::make_shared<const Homeo>(inverse(*h));
  const FuncPtr f = transport(std::make_shared<const FuncModel>(coordinate_y()), back).lazy;

  PulledBackWitness r;
  r.n = n;
  r.partial_sum = divergence_demo(n).partial_sum;
  r.variation = segment_variation(*f, sigma.segment(0));
  std::vector<Point2> z;
  for (const auto& x : fixtures::polyline_points_of(tau)) z.push_back(apply_inverse(*h, x));
  r.witness_cvar = cvar(*f, PointList(z));
  const bool increasing = z[0].x < z[1].x;
  r.monotone = true;
  for (std::size_t j = 0; j < z.size(); ++j) {
    r.z.push_back(z[j].x);
    if (j > 0) r.monotone = r.monotone && z[j].x != z[j - 1].x && (z[j - 1].x < z[j].x) == increasing;
  }
  return r;
}

}  // namespace lgvar
