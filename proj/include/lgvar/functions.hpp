#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "lgvar/errors.hpp"
#include "lgvar/exact_sum.hpp"
#include "lgvar/geometry.hpp"
#include "lgvar/graph.hpp"
#include "lgvar/homeo.hpp"

namespace lgvar {

using Complex = std::complex<double>;

/// Σ c_{nm} x^n y^m.
struct PolyXY {
  struct Term {
    unsigned n = 0;
    unsigned m = 0;
    Complex c;
  };
  std::vector<Term> terms;
};

struct PwlKnot {
  Rational t;
  Complex value;
};

/// Continuous piecewise-linear in each segment's parameter; knots[e] runs from t = 0 to t = 1.
struct PerSegmentPWL {
  std::shared_ptr<const LinearGraph> graph;
  std::vector<std::vector<PwlKnot>> knots;
};

/// 0 on [0, δ/2], 1 on [δ, 1-δ], 0 on [1-δ/2, 1] of the carrier, linear in between; 0 elsewhere.
struct KDelta {
  std::shared_ptr<const LinearGraph> graph;
  std::size_t carrier = 0;
  Rational delta;
};

class FuncModel;
using FuncPtr = std::shared_ptr<const FuncModel>;

/// base ∘ homeo⁻¹, evaluated lazily on homeo->target.
struct Transported {
  FuncPtr base;
  std::shared_ptr<const Homeo> homeo;
};

enum class PointwiseOp { Sum, Product };

struct Pointwise {
  PointwiseOp op = PointwiseOp::Sum;
  FuncPtr lhs;
  FuncPtr rhs;
};

class FuncModel {
 public:
  using Variant = std::variant<PolyXY, PerSegmentPWL, KDelta, Transported, Pointwise>;

  explicit FuncModel(Variant v) : v_(std::move(v)) {}
  [[nodiscard]] const Variant& model() const { return v_; }

  template <class T>
  [[nodiscard]] const T* as() const {
    return std::get_if<T>(&v_);
  }

 private:
  Variant v_;
};

inline std::vector<PwlKnot> k_delta_knots(const Rational& delta) {
  const Rational half = delta / Rational(2);
  return {{Rational(0), 0.0},     {half, 0.0},
          {delta, 1.0},          {Rational(1) - delta, 1.0},
          {Rational(1) - half, 0.0}, {Rational(1), 0.0}};
}

inline FuncModel make_polyxy(std::vector<PolyXY::Term> terms) { return FuncModel(PolyXY{std::move(terms)}); }
inline FuncModel constant(Complex c) { return make_polyxy({{0, 0, c}}); }
inline FuncModel coordinate_x() { return make_polyxy({{1, 0, 1.0}}); }
inline FuncModel coordinate_y() { return make_polyxy({{0, 1, 1.0}}); }

/// Validates knot structure and agreement at shared vertices.
inline FuncModel make_pwl(std::shared_ptr<const LinearGraph> graph, std::vector<std::vector<PwlKnot>> knots) {
  if (!graph) throw DomainError("piecewise-linear function without a graph");
  if (knots.size() != graph->edge_count()) throw DomainError("need one knot list per segment");
  for (const auto& ks : knots) {
    if (ks.size() < 2 || !ks.front().t.is_zero() || ks.back().t != Rational(1)) {
      throw DomainError("knot lists must start at t = 0 and end at t = 1");
    }
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
      if (!(ks[i].t < ks[i + 1].t)) throw DomainError("knot parameters must be strictly increasing");
    }
  }
  for (std::size_t v = 0; v < graph->vertex_count(); ++v) {
    std::optional<Complex> seen;
    for (std::size_t e : graph->incident(v)) {
      const Complex value = graph->edges()[e].first == v ? knots[e].front().value : knots[e].back().value;
      if (seen && *seen != value) throw DomainError("values disagree at vertex " + std::to_string(v));
      seen = value;
    }
  }
  return FuncModel(PerSegmentPWL{std::move(graph), std::move(knots)});
}

inline FuncModel make_k_delta(std::shared_ptr<const LinearGraph> graph, std::size_t carrier, const Rational& delta) {
  if (!graph) throw DomainError("bump function without a graph");
  if (carrier >= graph->edge_count()) throw DomainError("carrier index out of range");
  if (delta.sign() <= 0 || !(delta < Rational(1, 2))) throw DomainError("delta must lie in (0, 1/2)");
  return FuncModel(KDelta{std::move(graph), carrier, delta});
}

inline FuncModel sum(FuncPtr f, FuncPtr g) { return FuncModel(Pointwise{PointwiseOp::Sum, std::move(f), std::move(g)}); }
inline FuncModel product(FuncPtr f, FuncPtr g) {
  return FuncModel(Pointwise{PointwiseOp::Product, std::move(f), std::move(g)});
}

namespace detail {

inline Complex ipow(Complex base, unsigned e) {
  Complex r = 1.0;
  while (e != 0) {
    if (e & 1U) r *= base;
    base *= base;
    e >>= 1U;
  }
  return r;
}

inline double ipow(double base, unsigned e) { return std::real(ipow(Complex(base), e)); }

/// Index k with knots[k].t <= t <= knots[k+1].t.
inline std::size_t piece_index(const std::vector<PwlKnot>& knots, const Rational& t) {
  auto it = std::upper_bound(knots.begin(), knots.end(), t, [](const Rational& x, const PwlKnot& k) { return x < k.t; });
  std::size_t k = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
  return std::min(k, knots.size() - 2);
}

inline Complex pwl_value(const std::vector<PwlKnot>& knots, const Rational& t) {
  const std::size_t k = piece_index(knots, t);
  if (t == knots[k].t) return knots[k].value;
  if (t == knots[k + 1].t) return knots[k + 1].value;
  const double lambda = ((t - knots[k].t) / (knots[k + 1].t - knots[k].t)).to_double();
  return knots[k].value + lambda * (knots[k + 1].value - knots[k].value);
}

// A piece of a query segment lying inside one graph edge, with parameters on both.
struct EdgePiece {
  std::size_t edge;
  Rational t0;  // on the edge, at the piece start
  Rational t1;
  Rational u0;  // on the query segment
  Rational u1;
};

/// Split s at the graph's vertices; every piece must lie in a single edge.
inline std::vector<EdgePiece> pieces_along(const LinearGraph& g, const Segment& s) {
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  for (const Point2& v : g.vertices()) {
    if (auto u = param_of(s, v)) cuts.push_back(*u);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<EdgePiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Segment sub(param_point(s, cuts[i]), param_point(s, cuts[i + 1]));
    const auto e = g.edge_containing(sub);
    if (!e) throw DomainError("segment is not contained in the graph");
    out.push_back({*e, *param_of(g.segment(*e), sub.a()), *param_of(g.segment(*e), sub.b()), cuts[i], cuts[i + 1]});
  }
  return out;
}

}  // namespace detail

inline Complex evaluate(const FuncModel& f, const Point2& p);

namespace detail {

inline Complex evaluate_poly(const PolyXY& poly, double x, double y) {
  Complex r = 0.0;
  for (const auto& term : poly.terms) r += term.c * (ipow(x, term.n) * ipow(y, term.m));
  return r;
}

template <class Graphed>
std::pair<std::size_t, Rational> locate_on(const Graphed& model, const Point2& p) {
  auto loc = model.graph->locate(p);
  if (!loc) throw DomainError("point is not on the graph");
  return {loc->edge, loc->t};
}

}  // namespace detail

inline Complex evaluate(const FuncModel& f, const Point2& p) {
  return std::visit(
      [&](const auto& m) -> Complex {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PolyXY>) {
          return detail::evaluate_poly(m, p.x.to_double(), p.y.to_double());
        } else if constexpr (std::is_same_v<T, PerSegmentPWL>) {
          const auto [e, t] = detail::locate_on(m, p);
          return detail::pwl_value(m.knots[e], t);
        } else if constexpr (std::is_same_v<T, KDelta>) {
          const auto [e, t] = detail::locate_on(m, p);
          if (e != m.carrier) {
            // A carrier endpoint may be located on a neighbouring edge first; k_δ vanishes there anyway.
            return 0.0;
          }
          return detail::pwl_value(k_delta_knots(m.delta), t);
        } else if constexpr (std::is_same_v<T, Transported>) {
          return evaluate(*m.base, apply_inverse(*m.homeo, p));
        } else {
          const Complex a = evaluate(*m.lhs, p);
          const Complex b = evaluate(*m.rhs, p);
          return m.op == PointwiseOp::Sum ? a + b : a * b;
        }
      },
      f.model());
}

/// Graph a function is tied to (the target graph for transported functions), if any.
inline const LinearGraph* attached_graph(const FuncModel& f) {
  return std::visit(
      [](const auto& m) -> const LinearGraph* {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PolyXY>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, PerSegmentPWL> || std::is_same_v<T, KDelta>) {
          return m.graph.get();
        } else if constexpr (std::is_same_v<T, Transported>) {
          return &m.homeo->target;
        } else {
          if (const auto* g = attached_graph(*m.lhs)) return g;
          return attached_graph(*m.rhs);
        }
      },
      f.model());
}

/// Accumulates variation contributions. Contributions from the same linear piece of a
/// piecewise-linear model are merged through exact rational weights, so refining a
/// segment or moving through a transport leaves the total bit-identical.
class VariationTerms {
 public:
  struct Key {
    const void* owner;
    std::size_t edge;
    std::size_t piece;
    auto operator<=>(const Key&) const = default;
  };

  void add_piece(const Key& key, const Rational& weight, double modulus) {
    if (modulus == 0.0 || weight.is_zero()) return;
    auto [it, inserted] = pieces_.try_emplace(key, weight, modulus);
    if (!inserted) it->second.first += weight;
  }
  void add(double v) { loose_.push_back(v); }
  void merge(const VariationTerms& other) {
    for (const auto& [k, wm] : other.pieces_) add_piece(k, wm.first, wm.second);
    loose_.insert(loose_.end(), other.loose_.begin(), other.loose_.end());
  }

  [[nodiscard]] double total() const {
    std::vector<double> parts = loose_;
    for (const auto& [k, wm] : pieces_) parts.push_back(wm.first.to_double() * wm.second);
    return exact_sum(parts);
  }

  /// total() / divisor, with the piece weights divided exactly before rounding.
  [[nodiscard]] double total_over(std::size_t divisor) const {
    if (divisor == 1) return total();
    const double d = static_cast<double>(divisor);
    const Rational q(1, static_cast<long>(divisor));
    std::vector<double> parts;
    for (double v : loose_) parts.push_back(v / d);
    for (const auto& [k, wm] : pieces_) parts.push_back((wm.first * q).to_double() * wm.second);
    return exact_sum(parts);
  }

 private:
  std::map<Key, std::pair<Rational, double>> pieces_;
  std::vector<double> loose_;
};

struct Tolerances {
  double variation = 1e-9;  // stop refining once a doubling gains less than this (relative to max(1, value))
  double sup = 1e-9;
};

namespace detail {

using Sampler = std::function<Complex(double)>;

/// Coefficients (lowest degree first) of t -> poly(param_point(s, t)).
inline std::vector<Complex> poly_along(const PolyXY& poly, const Segment& s) {
  const double ax = s.a().x.to_double();
  const double ay = s.a().y.to_double();
  const double dx = s.b().x.to_double() - ax;
  const double dy = s.b().y.to_double() - ay;
  unsigned nmax = 0;
  unsigned mmax = 0;
  for (const auto& term : poly.terms) {
    nmax = std::max(nmax, term.n);
    mmax = std::max(mmax, term.m);
  }
  auto powers = [](double a, double d, unsigned top) {
    std::vector<std::vector<double>> out{{1.0}};
    for (unsigned k = 1; k <= top; ++k) {
      const auto& prev = out.back();
      std::vector<double> next(prev.size() + 1, 0.0);
      for (std::size_t i = 0; i < prev.size(); ++i) {
        next[i] += a * prev[i];
        next[i + 1] += d * prev[i];
      }
      out.push_back(std::move(next));
    }
    return out;
  };
  const auto px = powers(ax, dx, nmax);
  const auto py = powers(ay, dy, mmax);
  std::vector<Complex> coeffs(nmax + mmax + 1, 0.0);
  for (const auto& term : poly.terms) {
    for (std::size_t i = 0; i < px[term.n].size(); ++i) {
      for (std::size_t j = 0; j < py[term.m].size(); ++j) coeffs[i + j] += term.c * (px[term.n][i] * py[term.m][j]);
    }
  }
  return coeffs;
}

inline Complex horner(const std::vector<Complex>& coeffs, double t) {
  Complex r = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * t + *it;
  return r;
}

/// Arc length of a polynomial path on [0, 1]: adaptive Gauss-Kronrod (7/15) on |p'|.
inline double poly_arc_length(const std::vector<Complex>& coeffs, double rel) {
  std::vector<Complex> deriv;
  for (std::size_t k = 1; k < coeffs.size(); ++k) deriv.push_back(coeffs[k] * static_cast<double>(k));
  if (deriv.empty()) return 0.0;
  static constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                    0.207784955007898467600689403773245, 0.0};
  static constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                   0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  auto rule = [&](double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double k = wgk[7] * std::abs(horner(deriv, c));
    double g = wg[3] * std::abs(horner(deriv, c));
    for (int i = 0; i < 7; ++i) {
      const double v = std::abs(horner(deriv, c - h * xgk[i])) + std::abs(horner(deriv, c + h * xgk[i]));
      k += wgk[i] * v;
      if (i % 2 == 1) g += wg[i / 2] * v;
    }
    return std::pair{k * h, std::abs(k - g) * h};
  };
  const double scale = std::max(rule(0.0, 1.0).first, 1e-300);
  std::vector<double> parts;
  std::vector<std::tuple<double, double, int>> stack{{0.0, 1.0, 0}};
  while (!stack.empty()) {
    const auto [a, b, depth] = stack.back();
    stack.pop_back();
    const auto [value, err] = rule(a, b);
    if (err <= rel * scale * (b - a) || depth >= 60) {
      parts.push_back(value);
    } else {
      const double m = 0.5 * (a + b);
      stack.emplace_back(a, m, depth + 1);
      stack.emplace_back(m, b, depth + 1);
    }
  }
  return exact_sum(parts);
}

/// t -> f(param_point(s, t)), with a fast path for polynomials.
inline Sampler sampler_on(const FuncModel& f, const Segment& s) {
  if (const auto* poly = f.as<PolyXY>()) {
    return [coeffs = poly_along(*poly, s)](double t) { return horner(coeffs, t); };
  }
  return [&f, s](double t) { return evaluate(f, param_point(s, Rational::from_double(t))); };
}

inline double partition_sum(const Sampler& g, std::size_t n) {
  std::vector<double> parts;
  parts.reserve(n);
  Complex prev = g(0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const Complex cur = g(static_cast<double>(i) / static_cast<double>(n));
    parts.push_back(std::abs(cur - prev));
    prev = cur;
  }
  return exact_sum(parts);
}

/// Uniform partitions doubled from 64 points until the gain drops below tolerance.
inline double generic_variation(const Sampler& g, double tol, std::size_t cap) {
  std::size_t n = 64;
  double prev = partition_sum(g, n);
  while (n < cap) {
    n *= 2;
    const double cur = partition_sum(g, n);
    if (cur - prev < tol * std::max(1.0, cur)) return cur;
    prev = cur;
  }
  return prev;
}

/// Dense sampling followed by golden-section refinement around each sampled local maximum.
inline double generic_sup(const Sampler& g, double tol) {
  constexpr std::size_t n = 1024;
  std::vector<double> mod(n + 1);
  for (std::size_t i = 0; i <= n; ++i) mod[i] = std::abs(g(static_cast<double>(i) / n));
  double best = *std::max_element(mod.begin(), mod.end());
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (mod[i] < mod[i - 1] || mod[i] < mod[i + 1]) continue;
    double lo = static_cast<double>(i - 1) / n;
    double hi = static_cast<double>(i + 1) / n;
    double c = hi - phi * (hi - lo);
    double d = lo + phi * (hi - lo);
    double fc = std::abs(g(c));
    double fd = std::abs(g(d));
    while (hi - lo > tol * 1e-3) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - phi * (hi - lo);
        fc = std::abs(g(c));
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + phi * (hi - lo);
        fd = std::abs(g(d));
      }
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

inline constexpr std::size_t kGenericCap = std::size_t{1} << 14;

/// Variation of a piecewise-linear knot list restricted to [lo, hi] (edge parameters).
inline void pwl_terms(const void* owner, std::size_t edge, const std::vector<PwlKnot>& knots, const Rational& a,
                      const Rational& b, VariationTerms& out) {
  const Rational lo = min(a, b);
  const Rational hi = max(a, b);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const Rational from = max(lo, knots[k].t);
    const Rational to = min(hi, knots[k + 1].t);
    if (!(from < to)) continue;
    out.add_piece({owner, edge, k}, (to - from) / (knots[k + 1].t - knots[k].t),
                  std::abs(knots[k + 1].value - knots[k].value));
  }
}

inline double pwl_sup(const std::vector<PwlKnot>& knots, const Rational& a, const Rational& b) {
  const Rational lo = min(a, b);
  const Rational hi = max(a, b);
  double best = 0.0;
  for (const auto& k : knots) {
    if (lo < k.t && k.t < hi) best = std::max(best, std::abs(k.value));
  }
  for (const Rational* end : {&lo, &hi}) {
    const std::size_t k = piece_index(knots, *end);
    const double cap = std::max(std::abs(knots[k].value), std::abs(knots[k + 1].value));
    best = std::max(best, std::min(cap, std::abs(pwl_value(knots, *end))));
  }
  return best;
}

}  // namespace detail

/// Variation contributions of f along s (s must lie in the graph f is attached to).
inline void segment_terms(const FuncModel& f, const Segment& s, VariationTerms& out, const Tolerances& tol = {}) {
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PerSegmentPWL>) {
          for (const auto& piece : detail::pieces_along(*m.graph, s)) {
            detail::pwl_terms(&m, piece.edge, m.knots[piece.edge], piece.t0, piece.t1, out);
          }
        } else if constexpr (std::is_same_v<T, KDelta>) {
          const auto knots = k_delta_knots(m.delta);
          for (const auto& piece : detail::pieces_along(*m.graph, s)) {
            if (piece.edge == m.carrier) detail::pwl_terms(&m, piece.edge, knots, piece.t0, piece.t1, out);
          }
        } else if constexpr (std::is_same_v<T, Transported>) {
          for (const auto& piece : detail::pieces_along(m.homeo->target, s)) {
            const Segment sub(param_point(s, piece.u0), param_point(s, piece.u1));
            segment_terms(*m.base, Segment(apply_inverse(*m.homeo, sub.a()), apply_inverse(*m.homeo, sub.b())), out,
                          tol);
          }
        } else if constexpr (std::is_same_v<T, PolyXY>) {
          out.add(detail::poly_arc_length(detail::poly_along(m, s), tol.variation * 1e-5));
        } else {
          if (const auto* g = attached_graph(f); g != nullptr) detail::pieces_along(*g, s);
          out.add(detail::generic_variation(detail::sampler_on(f, s), tol.variation, detail::kGenericCap));
        }
      },
      f.model());
}

/// Classical total variation of f along s.
inline double segment_variation(const FuncModel& f, const Segment& s, const Tolerances& tol = {}) {
  VariationTerms terms;
  segment_terms(f, s, terms, tol);
  return terms.total();
}

/// max |f| along s.
inline double segment_sup(const FuncModel& f, const Segment& s, const Tolerances& tol = {}) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        double best = 0.0;
        if constexpr (std::is_same_v<T, PerSegmentPWL>) {
          for (const auto& piece : detail::pieces_along(*m.graph, s)) {
            best = std::max(best, detail::pwl_sup(m.knots[piece.edge], piece.t0, piece.t1));
          }
        } else if constexpr (std::is_same_v<T, KDelta>) {
          const auto knots = k_delta_knots(m.delta);
          for (const auto& piece : detail::pieces_along(*m.graph, s)) {
            if (piece.edge == m.carrier) best = std::max(best, detail::pwl_sup(knots, piece.t0, piece.t1));
          }
        } else if constexpr (std::is_same_v<T, Transported>) {
          for (const auto& piece : detail::pieces_along(m.homeo->target, s)) {
            const Segment sub(param_point(s, piece.u0), param_point(s, piece.u1));
            best = std::max(best, segment_sup(*m.base,
                                              Segment(apply_inverse(*m.homeo, sub.a()), apply_inverse(*m.homeo, sub.b())),
                                              tol));
          }
        } else {
          if (const auto* g = attached_graph(f); g != nullptr) detail::pieces_along(*g, s);
          best = detail::generic_sup(detail::sampler_on(f, s), tol.sup);
        }
        return best;
      },
      f.model());
}

inline double sup_norm(const FuncModel& f, const LinearGraph& sigma, const Tolerances& tol = {}) {
  double best = 0.0;
  for (const auto& s : sigma.segments()) best = std::max(best, segment_sup(f, s, tol));
  return best;
}

/// Parameters on s (sorted, including 0 and 1) where f may change slope; absent for
/// models without a finite breakpoint set.
inline std::optional<std::vector<Rational>> breakpoints_on(const FuncModel& f, const Segment& s) {
  auto mapped = [](const detail::EdgePiece& piece, const std::vector<PwlKnot>& knots, std::vector<Rational>& out) {
    const Rational lo = min(piece.t0, piece.t1);
    const Rational hi = max(piece.t0, piece.t1);
    for (const auto& k : knots) {
      if (lo < k.t && k.t < hi) out.push_back(piece.u0 + (k.t - piece.t0) / (piece.t1 - piece.t0) * (piece.u1 - piece.u0));
    }
  };
  std::vector<Rational> out{Rational(0), Rational(1)};
  const bool finite = std::visit(
      [&](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PerSegmentPWL>) {
          for (const auto& piece : detail::pieces_along(*m.graph, s)) {
            out.push_back(piece.u0);
            mapped(piece, m.knots[piece.edge], out);
          }
          return true;
        } else if constexpr (std::is_same_v<T, KDelta>) {
          const auto knots = k_delta_knots(m.delta);
          for (const auto& piece : detail::pieces_along(*m.graph, s)) {
            out.push_back(piece.u0);
            if (piece.edge == m.carrier) mapped(piece, knots, out);
          }
          return true;
        } else if constexpr (std::is_same_v<T, Transported>) {
          for (const auto& piece : detail::pieces_along(m.homeo->target, s)) {
            const Segment sub(param_point(s, piece.u0), param_point(s, piece.u1));
            const auto inner =
                breakpoints_on(*m.base, Segment(apply_inverse(*m.homeo, sub.a()), apply_inverse(*m.homeo, sub.b())));
            if (!inner) return false;
            for (const Rational& w : *inner) out.push_back(piece.u0 + w * (piece.u1 - piece.u0));
          }
          return true;
        } else {
          return false;
        }
      },
      f.model());
  if (!finite) return std::nullopt;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

/// Step between parameters tx and ty of edge e of a piecewise-linear model; false when
/// the step leaves a single linear piece.
inline bool pwl_step(const void* owner, std::size_t e, const std::vector<PwlKnot>& knots, const Rational& tx,
                     const Rational& ty, VariationTerms& out) {
  const std::size_t k = piece_index(knots, min(tx, ty));
  if (knots[k + 1].t < max(tx, ty)) return false;
  pwl_terms(owner, e, knots, tx, ty, out);
  return true;
}

/// Same as the piecewise-linear branch of step_terms when the common edge is known.
inline bool edge_step_terms(const FuncModel& f, std::size_t e, const Rational& tx, const Rational& ty,
                            VariationTerms& out) {
  if (const auto* m = f.as<PerSegmentPWL>()) return pwl_step(m, e, m->knots[e], tx, ty, out);
  if (const auto* m = f.as<KDelta>()) return e != m->carrier || pwl_step(m, e, k_delta_knots(m->delta), tx, ty, out);
  return false;
}

}  // namespace detail

/// Contribution |f(y) - f(x)| of one step of a point list; steps inside a single linear
/// piece are recorded against that piece so they combine exactly with segment_terms.
inline void step_terms(const FuncModel& f, const Point2& x, const Point2& y, VariationTerms& out) {
  if (x == y) return;
  const Segment step(x, y);
  const bool handled = std::visit(
      [&](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PerSegmentPWL> || std::is_same_v<T, KDelta>) {
          const auto e = m.graph->edge_containing(step);
          if (!e) return false;
          const Segment& seg = m.graph->segment(*e);
          return detail::edge_step_terms(f, *e, *param_of(seg, x), *param_of(seg, y), out);
        } else if constexpr (std::is_same_v<T, Transported>) {
          if (!m.homeo->target.edge_containing(step)) return false;
          step_terms(*m.base, apply_inverse(*m.homeo, x), apply_inverse(*m.homeo, y), out);
          return true;
        } else {
          return false;
        }
      },
      f.model());
  if (!handled) out.add(std::abs(evaluate(f, y) - evaluate(f, x)));
}

}  // namespace lgvar
