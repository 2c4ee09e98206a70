#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lgvar/errors.hpp"
#include "lgvar/exact_sum.hpp"
#include "lgvar/functions.hpp"
#include "lgvar/geometry.hpp"
#include "lgvar/graph.hpp"

namespace lgvar {

/// Ordered list [x0, ..., xn]; consecutive repeats are dropped.
class PointList {
 public:
  explicit PointList(std::vector<Point2> points) {
    if (points.empty()) throw DomainError("a point list needs at least one point");
    for (auto& p : points) {
      if (points_.empty() || points_.back() != p) points_.push_back(std::move(p));
    }
  }

  /// Also checks that every point lies on the graph.
  static PointList on(const LinearGraph& g, std::vector<Point2> points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!g.contains(points[i])) throw DomainError("point " + std::to_string(i) + " is not on the graph");
    }
    return PointList(std::move(points));
  }

  [[nodiscard]] const std::vector<Point2>& points() const { return points_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] std::size_t segment_count() const { return points_.size() - 1; }

 private:
  std::vector<Point2> points_;
};

namespace detail {

/// Def. of crossing segments applied to a side assignment of the list.
template <class SideOf>
std::size_t count_crossings(std::size_t len, SideOf side_of) {
  std::size_t count = 0;
  Side before = Side::On;
  Side cur = len > 0 ? side_of(0) : Side::On;
  for (std::size_t i = 0; i + 1 < len; ++i) {
    const Side next = side_of(i + 1);
    if (cur != Side::On && next != Side::On && cur != next) {
      ++count;
    } else if (cur == Side::On && (i == 0 || before != Side::On)) {
      ++count;
    }
    before = cur;
    cur = next;
  }
  return count;
}

}  // namespace detail

inline std::size_t crossing_count(const PointList& s, const Line& line) {
  std::vector<Side> sides;
  sides.reserve(s.size());
  for (const auto& p : s.points()) sides.push_back(side_of_line(p, line));
  return detail::count_crossings(sides.size(), [&](std::size_t i) { return sides[i]; });
}

inline double cvar(const FuncModel& f, const PointList& s) {
  VariationTerms terms;
  for (std::size_t i = 1; i < s.size(); ++i) step_terms(f, s.points()[i - 1], s.points()[i], terms);
  return terms.total();
}

/// cvar(f, S) / v, rounded once per linear piece rather than after the sum.
inline double cvar_ratio(const FuncModel& f, const PointList& s, std::size_t v) {
  VariationTerms terms;
  for (std::size_t i = 1; i < s.size(); ++i) step_terms(f, s.points()[i - 1], s.points()[i], terms);
  return terms.total_over(v);
}

struct VfReport {
  std::size_t value = 1;
  Line witness{Point2{Rational(0), Rational(0)}, Point2{Rational(1), Rational(0)}};
  std::size_t pair_lines = 0;  // canonical pair lines examined
  std::size_t classes = 0;     // side assignments evaluated
};

namespace detail {

/// Exact orientation for a fixed point set: a 128-bit homogeneous path for small
/// rationals, a filtered double path otherwise, rational arithmetic as last resort.
class OrientEngine {
 public:
  explicit OrientEngine(const std::vector<Point2>& pts) {
    small_ = true;
    for (const auto& p : pts) {
      Approx a{p.x.to_double(), p.y.to_double(), 0, 0, 0};
      const auto sx = p.x.small_parts(20);
      const auto sy = p.y.small_parts(20);
      if (sx && sy) {
        a.X = static_cast<__int128>(sx->first) * sy->second;
        a.Y = static_cast<__int128>(sy->first) * sx->second;
        a.W = static_cast<__int128>(sx->second) * sy->second;
      } else {
        small_ = false;
      }
      approx_.push_back(a);
    }
    if (!small_) {
      for (const auto& p : pts) {
        const mpz_class& nx = p.x.raw().get_num();
        const mpz_class& dx = p.x.raw().get_den();
        const mpz_class& ny = p.y.raw().get_num();
        const mpz_class& dy = p.y.raw().get_den();
        exact_.push_back({nx * dy, ny * dx, dx * dy});
      }
    }
  }

  [[nodiscard]] int orient(std::size_t i, std::size_t j, std::size_t k) const {
    const Approx& p = approx_[i];
    const Approx& q = approx_[j];
    const Approx& r = approx_[k];
    if (small_) {
      const __int128 det = p.X * (q.Y * r.W - r.Y * q.W) - p.Y * (q.X * r.W - r.X * q.W) +
                           p.W * (q.X * r.Y - r.X * q.Y);
      return det > 0 ? 1 : (det < 0 ? -1 : 0);
    }
    const double det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    const double bound = 0x1p-48 * ((std::fabs(q.x) + std::fabs(p.x)) * (std::fabs(r.y) + std::fabs(p.y)) +
                                    (std::fabs(q.y) + std::fabs(p.y)) * (std::fabs(r.x) + std::fabs(p.x)));
    if (bound > 1e-280 && std::fabs(det) > bound) return det > 0 ? 1 : -1;
    const Homogeneous& a = exact_[i];
    const Homogeneous& b = exact_[j];
    const Homogeneous& c = exact_[k];
    const mpz_class big = a.X * (b.Y * c.W - c.Y * b.W) - a.Y * (b.X * c.W - c.X * b.W) + a.W * (b.X * c.Y - c.X * b.Y);
    return sgn(big);
  }

 private:
  struct Approx {
    double x;
    double y;
    __int128 X;
    __int128 Y;
    __int128 W;
  };
  struct Homogeneous {
    mpz_class X;
    mpz_class Y;
    mpz_class W;
  };
  std::vector<Approx> approx_;
  std::vector<Homogeneous> exact_;
  bool small_ = true;
};

inline int side_sign(Side s) { return s == Side::Left ? 1 : (s == Side::Right ? -1 : 0); }

// Perturbation class of a pair line: exact, or rotation about pivot C[pivot]
// sending earlier on-line points to `before`, later ones to `after`, the pivot to `pivot_side`.
struct LineClass {
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<std::size_t> on_line;  // lexicographically sorted
  bool exact = true;
  std::size_t pivot = 0;
  Side before = Side::Left;
  Side after = Side::Right;
  Side pivot_side = Side::On;
};

inline Line realize(const std::vector<Point2>& locs, const LineClass& k) {
  const Point2& p = locs[k.p];
  const Point2 d = locs[k.q] - p;
  if (k.exact) return Line(p, d);
  const Point2& c = locs[k.on_line[k.pivot]];
  const Point2 n = perp(d);
  const Rational d2 = dot(d, d);
  const int dir_sign = (d.x.sign() > 0 || (d.x.is_zero() && d.y.sign() > 0)) ? 1 : -1;
  // cross(d + ρεn, c + s d - c) = -ρ ε s |d|², so later points (s·dir_sign > 0) get sign -ρ·dir_sign.
  const int rho = -side_sign(k.after) * dir_sign;

  Rational mmin(1);
  Rational mrot(0);
  bool have_off = false;
  for (std::size_t r = 0; r < locs.size(); ++r) {
    const Point2 rc = locs[r] - c;
    mrot = max(mrot, cross(n, rc).abs());
    const Rational off = cross(d, rc).abs();
    if (!off.is_zero()) {
      mmin = have_off ? min(mmin, off) : off;
      have_off = true;
    }
  }
  const Rational eps = mmin / (Rational(2) * (mrot + Rational(1)));
  const Point2 rotated = d + (Rational(rho) * eps) * n;
  if (k.pivot_side == Side::On) return Line(c, rotated);

  Rational smin(1);
  bool have_s = false;
  for (std::size_t j = 0; j < k.on_line.size(); ++j) {
    if (j == k.pivot) continue;
    const Rational s = (dot(locs[k.on_line[j]] - c, d) / d2).abs();
    smin = have_s ? min(smin, s) : s;
    have_s = true;
  }
  const Rational eta = min(mmin / (Rational(2) * d2), eps * smin) / Rational(2);
  // The pivot sits on the side of sign(-η).
  const Rational signed_eta = k.pivot_side == Side::Left ? -eta : eta;
  return Line(c + signed_eta * n, rotated);
}

}  // namespace detail

namespace detail {

/// Enumeration behind variation_factor. Stops as soon as the running maximum exceeds
/// `stop_above` (the returned value is then only known to be larger, and has no witness).
inline VfReport variation_factor_until(const PointList& s, std::size_t stop_above) {
  const auto& pts = s.points();
  VfReport report;
  if (pts.size() == 1) {
    report.witness = Line(pts[0], Point2{Rational(1), Rational(0)});
    return report;
  }

  std::map<Point2, std::size_t> loc_of;
  std::vector<Point2> locs;
  std::vector<std::size_t> idx;
  idx.reserve(pts.size());
  for (const auto& p : pts) {
    auto [it, inserted] = loc_of.try_emplace(p, locs.size());
    if (inserted) locs.push_back(p);
    idx.push_back(it->second);
  }
  const std::size_t n_loc = locs.size();
  const detail::OrientEngine eng(locs);

  // A strictly monotone walk along one line meets every line at most once.
  {
    bool collinear = true;
    for (std::size_t r = 2; r < n_loc && collinear; ++r) collinear = eng.orient(0, 1, r) == 0;
    bool increasing = true;
    bool decreasing = true;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      increasing = increasing && pts[i - 1] < pts[i];
      decreasing = decreasing && pts[i] < pts[i - 1];
    }
    if (collinear && (increasing || decreasing)) {
      report.witness = Line::through(pts[0], pts[1]);
      report.pair_lines = 1;
      report.classes = 1;
      return report;
    }
  }

  std::vector<Side> side(n_loc, Side::On);
  auto count = [&]() {
    ++report.classes;
    return detail::count_crossings(idx.size(), [&](std::size_t i) { return side[idx[i]]; });
  };

  const std::size_t ceiling = stop_above < pts.size() - 1 ? stop_above + 1 : pts.size() - 1;
  std::size_t best = 0;
  detail::LineClass best_class;
  detail::LineClass current;
  auto consider = [&](std::size_t value) {
    if (value > best) {
      best = value;
      best_class = current;
    }
  };

  for (std::size_t p = 0; p < n_loc && best < ceiling; ++p) {
    for (std::size_t q = p + 1; q < n_loc && best < ceiling; ++q) {
      // Each line is visited once, from its two lowest-index points.
      std::vector<std::size_t> on_line;
      bool canonical = true;
      for (std::size_t r = 0; r < n_loc; ++r) {
        if (r == p || r == q) {
          side[r] = Side::On;
          on_line.push_back(r);
          continue;
        }
        const int o = eng.orient(p, q, r);
        side[r] = side_from_sign(o);
        if (o == 0) {
          if (r < q) {
            canonical = false;
            break;
          }
          on_line.push_back(r);
        }
      }
      if (!canonical) continue;
      ++report.pair_lines;
      std::sort(on_line.begin(), on_line.end(), [&](std::size_t a, std::size_t b) { return locs[a] < locs[b]; });

      current = {p, q, on_line, true, 0, Side::Left, Side::Right, Side::On};
      consider(count());
      current.exact = false;
      for (std::size_t c = 0; c < on_line.size() && best < ceiling; ++c) {
        current.pivot = c;
        for (const auto& [before, after] : {std::pair{Side::Left, Side::Right}, std::pair{Side::Right, Side::Left}}) {
          current.before = before;
          current.after = after;
          for (const Side pivot_side : {Side::On, before, after}) {
            current.pivot_side = pivot_side;
            for (std::size_t j = 0; j < on_line.size(); ++j) {
              side[on_line[j]] = j < c ? before : (j > c ? after : pivot_side);
            }
            consider(count());
          }
        }
      }
    }
  }

  report.value = best;
  if (best > stop_above) return report;
  report.witness = detail::realize(locs, best_class);
  if (crossing_count(s, report.witness) != best) {
    throw std::logic_error("witness line does not attain the variation factor");
  }
  return report;
}

}  // namespace detail

/// Exact vf(S) = max over lines of the crossing count. Lines are grouped by the side
/// assignment they induce; every assignment is realised by a line through two points of
/// S, either exactly or after a small rotation about one on-line point plus a shift.
inline VfReport variation_factor(const PointList& s) {
  return detail::variation_factor_until(s, std::numeric_limits<std::size_t>::max());
}

/// Effort knobs for the lower-bound search.
struct SearchBudget {
  std::size_t restarts = 64;
  std::size_t moves = 512;
  std::size_t cap = 40;  // maximum list length during local moves
  std::size_t threads = 1;
  std::vector<PointList> extra_seeds;
};

struct LowerBound {
  double value = 0.0;
  PointList witness{std::vector<Point2>{Point2{}}};
  std::size_t witness_vf = 1;
};

namespace detail {

struct SearchPoint {
  std::size_t seg;
  Rational t;
  Point2 pos;
  Complex value;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

inline std::vector<Rational> thin(std::vector<Rational> ts, std::size_t limit) {
  if (ts.size() <= limit || limit < 2) return ts;
  std::vector<Rational> out;
  out.reserve(limit);
  for (std::size_t i = 0; i < limit; ++i) out.push_back(ts[i * (ts.size() - 1) / (limit - 1)]);
  return out;
}

class LowerSearch {
 public:
  LowerSearch(const FuncModel& f, const LinearGraph& sigma, const SearchBudget& budget, std::uint64_t seed)
      : f_(f), sigma_(sigma), budget_(budget), seed_(seed) {
    const LinearGraph* g = attached_graph(f);
    same_edges_ = (f.as<PerSegmentPWL>() != nullptr || f.as<KDelta>() != nullptr) && g != nullptr &&
                  (g == &sigma || g->segments() == sigma.segments());
    loose_only_ = f.as<PolyXY>() != nullptr || f.as<Pointwise>() != nullptr;
  }

  LowerBound run() {
    const auto seeds = build_seeds();
    Candidate best;
    for (const auto& s : seeds) {
      Candidate c = score(s);
      if (c.value > best.value || best.points.empty()) best = std::move(c);
    }

    std::vector<Candidate> results(budget_.restarts);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t r = next++; r < budget_.restarts; r = next++) results[r] = restart(r, seeds);
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(budget_.threads, budget_.restarts));
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    for (auto& c : results) {
      if (c.value > best.value) best = std::move(c);
    }
    return {best.value, PointList(realize(best.points)), best.vf};
  }

 private:
  struct Candidate {
    std::vector<SearchPoint> points;
    double value = 0.0;
    double cvar = 0.0;
    std::size_t vf = 1;
    Line witness{Point2{Rational(0), Rational(0)}, Point2{Rational(1), Rational(0)}};
  };

  [[nodiscard]] SearchPoint make(std::size_t seg, Rational t) const {
    Point2 pos = param_point(sigma_.segment(seg), t);
    const Complex value = evaluate(f_, pos);
    return {seg, std::move(t), std::move(pos), value};
  }

  static std::vector<Point2> realize(const std::vector<SearchPoint>& pts) {
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(p.pos);
    return out;
  }

  // Drop consecutive points that coincide in the plane.
  static std::vector<SearchPoint> normalized(std::vector<SearchPoint> pts) {
    std::vector<SearchPoint> out;
    out.reserve(pts.size());
    for (auto& p : pts) {
      if (!out.empty() && p.pos == out.back().pos) continue;
      out.push_back(std::move(p));
    }
    return out;
  }

  // Same terms as step_terms, using the stored edge parameters and values of the endpoints.
  void step(const SearchPoint& a, const SearchPoint& b, VariationTerms& terms) const {
    if (loose_only_) {
      terms.add(std::abs(b.value - a.value));
      return;
    }
    if (!same_edges_) {
      step_terms(f_, a.pos, b.pos, terms);
      return;
    }
    auto interior = [](const SearchPoint& p) { return p.t.sign() > 0 && p.t < Rational(1); };
    std::optional<std::size_t> edge;
    Rational ta;
    Rational tb;
    if (a.seg == b.seg) {
      edge = a.seg;
      ta = a.t;
      tb = b.t;
    } else if (interior(a)) {
      if (auto u = param_of(sigma_.segment(a.seg), b.pos)) {
        edge = a.seg;
        ta = a.t;
        tb = std::move(*u);
      }
    } else if (interior(b)) {
      if (auto u = param_of(sigma_.segment(b.seg), a.pos)) {
        edge = b.seg;
        ta = std::move(*u);
        tb = b.t;
      }
    } else {
      step_terms(f_, a.pos, b.pos, terms);
      return;
    }
    if (edge && detail::edge_step_terms(f_, *edge, ta, tb, terms)) return;
    terms.add(std::abs(b.value - a.value));
  }

  [[nodiscard]] VariationTerms list_terms(const std::vector<SearchPoint>& pts) const {
    VariationTerms terms;
    for (std::size_t i = 1; i < pts.size(); ++i) step(pts[i - 1], pts[i], terms);
    return terms;
  }

  Candidate score(std::vector<SearchPoint> pts) const {
    Candidate c;
    c.points = normalized(std::move(pts));
    const PointList list(realize(c.points));
    const VariationTerms terms = list_terms(c.points);
    c.cvar = terms.total();
    const VfReport vf = variation_factor(list);
    c.vf = vf.value;
    c.witness = vf.witness;
    c.value = terms.total_over(c.vf);
    return c;
  }

  [[nodiscard]] std::vector<Rational> partition(std::size_t seg, std::size_t limit) const {
    if (auto bp = breakpoints_on(f_, sigma_.segment(seg))) return thin(std::move(*bp), limit);
    const std::size_t n = std::min<std::size_t>(4096, limit - 1);
    std::vector<Rational> ts;
    for (std::size_t i = 0; i <= n; ++i) ts.emplace_back(static_cast<long>(i), static_cast<long>(n));
    return ts;
  }

  // Traverse segment `seg` from its endpoint `from_vertex`.
  void append_edge(std::vector<SearchPoint>& out, std::size_t seg, std::size_t from_vertex, std::size_t limit) const {
    auto ts = partition(seg, limit);
    if (sigma_.edges()[seg].first != from_vertex) std::reverse(ts.begin(), ts.end());
    for (auto& t : ts) out.push_back(make(seg, std::move(t)));
  }

  [[nodiscard]] std::vector<std::vector<SearchPoint>> build_seeds() const {
    std::vector<std::vector<SearchPoint>> seeds;
    const std::size_t m = sigma_.edge_count();
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<SearchPoint> s;
      append_edge(s, j, sigma_.edges()[j].first, 4097);
      seeds.push_back(std::move(s));
    }
    for (std::size_t v = 0; v < sigma_.vertex_count(); ++v) {
      const auto& inc = sigma_.incident(v);
      for (std::size_t a = 0; a < inc.size(); ++a) {
        for (std::size_t b = a + 1; b < inc.size(); ++b) {
          std::vector<SearchPoint> s;
          append_edge(s, inc[a], v, 64);
          std::reverse(s.begin(), s.end());
          append_edge(s, inc[b], v, 64);
          seeds.push_back(std::move(s));
        }
      }
    }
    {
      const auto order = edge_by_edge(sigma_);
      std::vector<bool> touched(sigma_.vertex_count(), false);
      std::vector<SearchPoint> s;
      const std::size_t per_edge = std::max<std::size_t>(2, 256 / m);
      for (std::size_t e : order.order) {
        const auto [u, v] = sigma_.edges()[e];
        const bool forward = touched[u] || !touched[v];
        append_edge(s, e, forward ? u : v, per_edge);
        touched[u] = touched[v] = true;
      }
      seeds.push_back(std::move(s));
    }
    for (const auto& extra : budget_.extra_seeds) {
      std::vector<SearchPoint> s;
      for (const auto& p : extra.points()) {
        const auto loc = sigma_.locate(p);
        if (!loc) throw DomainError("seed point is not on the graph");
        s.push_back({loc->edge, loc->t, p, evaluate(f_, p)});
      }
      seeds.push_back(std::move(s));
    }
    return seeds;
  }

  Candidate restart(std::size_t r, const std::vector<std::vector<SearchPoint>>& seeds) const {
    std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(r)));
    const std::size_t m = sigma_.edge_count();
    const std::size_t cap = std::max<std::size_t>(2, budget_.cap);
    constexpr long kGrid = 4096;
    auto uniform = [&](std::size_t lo, std::size_t hi) {
      return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    auto random_point = [&]() {
      const std::size_t seg = uniform(0, m - 1);
      return make(seg, Rational(static_cast<long>(uniform(0, kGrid)), kGrid));
    };

    std::vector<SearchPoint> start;
    if (r % 2 == 0) {
      const auto& s = seeds[uniform(0, seeds.size() - 1)];
      for (std::size_t i = 0; i < std::min(cap, s.size()); ++i) {
        start.push_back(s[s.size() <= cap ? i : i * (s.size() - 1) / (cap - 1)]);
      }
    } else {
      const std::size_t len = uniform(2, std::min<std::size_t>(cap, 8));
      for (std::size_t i = 0; i < len; ++i) start.push_back(random_point());
    }
    Candidate cur = score(std::move(start));
    Candidate best = cur;

    for (std::size_t step = 0; step < budget_.moves; ++step) {
      std::vector<SearchPoint> next = cur.points;
      switch (uniform(0, 3)) {
        case 0:  // insert
          if (next.size() >= cap) continue;
          next.insert(next.begin() + static_cast<std::ptrdiff_t>(uniform(0, next.size())), random_point());
          break;
        case 1:  // delete
          if (next.size() <= 1) continue;
          next.erase(next.begin() + static_cast<std::ptrdiff_t>(uniform(0, next.size() - 1)));
          break;
        case 2: {  // perturb along its segment
          auto& p = next[uniform(0, next.size() - 1)];
          const long shift = static_cast<long>(uniform(0, 512)) - 256;
          p = make(p.seg, max(Rational(0), min(Rational(1), p.t + Rational(shift, kGrid))));
          break;
        }
        default:  // jump
          next[uniform(0, next.size() - 1)] = random_point();
          break;
      }
      next = normalized(std::move(next));
      const PointList list(realize(next));
      const VariationTerms terms = list_terms(next);
      const double c = terms.total();
      const std::size_t lower_vf = std::max<std::size_t>(1, crossing_count(list, cur.witness));
      const double target = cur.value * (1.0 - 1e-12);  // the exact ratio may round either side of c / vf
      if (c / static_cast<double>(lower_vf) < target) continue;
      const VfReport vf = detail::variation_factor_until(list, largest_acceptable_vf(c, target));
      const double value = terms.total_over(vf.value);
      if (value < cur.value) continue;
      cur = Candidate{std::move(next), value, c, vf.value, vf.witness};
      if (cur.value > best.value) best = cur;
    }
    return best;
  }

  // Largest v with c / v >= target, evaluated in the same floating arithmetic as the score.
  static std::size_t largest_acceptable_vf(double c, double target) {
    if (!(target > 0.0)) return std::numeric_limits<std::size_t>::max();
    const double ratio = std::floor(c / target);
    if (ratio >= 1e15) return std::numeric_limits<std::size_t>::max();
    auto v = static_cast<std::size_t>(std::max(0.0, ratio));
    while (c / static_cast<double>(v + 1) >= target) ++v;
    while (v > 0 && c / static_cast<double>(v) < target) --v;
    return v;
  }

  const FuncModel& f_;
  const LinearGraph& sigma_;
  const SearchBudget& budget_;
  std::uint64_t seed_;
  bool same_edges_ = false;
  bool loose_only_ = false;
};

}  // namespace detail

/// Lower bound for the two-dimensional variation: best cvar(f, S) / vf(S) found by
/// seeded candidates plus random-restart local search. Deterministic for a fixed seed,
/// whatever the thread count.
inline LowerBound var_lower(const FuncModel& f, const LinearGraph& sigma, const SearchBudget& budget = {},
                            std::uint64_t seed = 0) {
  return detail::LowerSearch(f, sigma, budget, seed).run();
}

namespace detail {

inline VariationTerms all_terms(const FuncModel& f, const LinearGraph& sigma, std::vector<double>* per_segment,
                                const Tolerances& tol) {
  VariationTerms all;
  for (const auto& s : sigma.segments()) {
    VariationTerms one;
    segment_terms(f, s, one, tol);
    if (per_segment != nullptr) per_segment->push_back(one.total());
    all.merge(one);
  }
  return all;
}

}  // namespace detail

/// Σ_j var(f, s_j), accumulated so that refinements of the representation agree exactly.
inline double variation_sum(const FuncModel& f, const LinearGraph& sigma, const Tolerances& tol = {}) {
  return detail::all_terms(f, sigma, nullptr, tol).total();
}

/// ‖f‖∞ + Σ_j var(f, s_j).
inline double lg_value(const FuncModel& f, const LinearGraph& sigma, const Tolerances& tol = {}) {
  return sup_norm(f, sigma, tol) + variation_sum(f, sigma, tol);
}

/// Σ var(f, s_j) + 8 (m - 1) ‖f‖∞.
inline double var_upper(const FuncModel& f, const LinearGraph& sigma, const Tolerances& tol = {}) {
  const double m = static_cast<double>(sigma.edge_count());
  return variation_sum(f, sigma, tol) + 8.0 * (m - 1.0) * sup_norm(f, sigma, tol);
}

struct NormReport {
  double sup = 0.0;
  std::vector<double> segment_variations;
  double variation_sum = 0.0;
  double lg = 0.0;
  double var_lower = 0.0;
  double var_upper = 0.0;
  double bv_lower = 0.0;
  double bv_upper = 0.0;
  PointList witness{std::vector<Point2>{Point2{}}};
  std::size_t witness_vf = 1;
  std::uint64_t seed = 0;
};

inline NormReport lg_norm(const FuncModel& f, const LinearGraph& sigma, const SearchBudget& budget = {},
                          std::uint64_t seed = 0, const Tolerances& tol = {}) {
  NormReport r;
  r.seed = seed;
  r.sup = sup_norm(f, sigma, tol);
  r.variation_sum = detail::all_terms(f, sigma, &r.segment_variations, tol).total();
  r.lg = r.sup + r.variation_sum;
  const double m = static_cast<double>(sigma.edge_count());
  r.var_upper = r.variation_sum + 8.0 * (m - 1.0) * r.sup;
  const LowerBound lower = var_lower(f, sigma, budget, seed);
  r.var_lower = lower.value;
  r.witness = lower.witness;
  r.witness_vf = lower.witness_vf;
  r.bv_lower = r.sup + r.var_lower;
  r.bv_upper = r.sup + r.var_upper;
  return r;
}

struct DecompositionReport {
  double lg = 0.0;
  double lg_first = 0.0;
  double lg_second = 0.0;
  bool lower_holds = false;  // max(lg_first, lg_second) <= lg
  bool upper_holds = false;  // lg <= lg_first + lg_second
};

/// Split σ's edges into `first` and the rest; both parts must be connected.
inline DecompositionReport check_decomposition(const FuncModel& f, const LinearGraph& sigma,
                                               const std::vector<std::size_t>& first, const Tolerances& tol = {}) {
  std::vector<bool> in_first(sigma.edge_count(), false);
  for (std::size_t e : first) {
    if (e >= sigma.edge_count()) throw DomainError("edge index out of range");
    in_first[e] = true;
  }
  std::vector<Segment> a;
  std::vector<Segment> b;
  for (std::size_t e = 0; e < sigma.edge_count(); ++e) (in_first[e] ? a : b).push_back(sigma.segment(e));
  if (a.empty() || b.empty()) throw DomainError("both parts of a decomposition must be nonempty");
  auto part = [](std::vector<Segment> segs, const char* name) {
    try {
      return LinearGraph::from_segments(std::move(segs));
    } catch (const DomainError& e) {
      throw DomainError(std::string(name) + " part: " + e.what());
    }
  };
  const LinearGraph g1 = part(std::move(a), "first");
  const LinearGraph g2 = part(std::move(b), "second");
  DecompositionReport r;
  r.lg = lg_value(f, sigma, tol);
  r.lg_first = lg_value(f, g1, tol);
  r.lg_second = lg_value(f, g2, tol);
  r.lower_holds = std::max(r.lg_first, r.lg_second) <= r.lg;
  r.upper_holds = r.lg <= r.lg_first + r.lg_second;
  return r;
}

struct DivergenceDemo {
  std::size_t n = 0;
  double partial_sum = 0.0;
  std::vector<double> t;                          // t_j = 2 / ((2j - 1) π), j = 1..n
  std::vector<std::pair<double, double>> points;  // (t_j, t_j sin(1 / t_j)) = (t_j, ±t_j)
};

/// (2/π) Σ_{j=2}^n (1/(2j-1) + 1/(2j-3)) together with the sample points of the
/// curve (t, t sin 1/t) at which the increments are taken.
inline DivergenceDemo divergence_demo(std::size_t n) {
  if (n < 2) throw DomainError("n must be at least 2");
  DivergenceDemo d;
  d.n = n;
  std::vector<double> terms;
  terms.reserve(2 * n);
  for (std::size_t j = 2; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    terms.push_back(1.0 / (2.0 * jj - 1.0));
    terms.push_back(1.0 / (2.0 * jj - 3.0));
  }
  d.partial_sum = 2.0 / std::numbers::pi * exact_sum(terms);
  for (std::size_t j = 1; j <= n; ++j) {
    const double tj = 2.0 / ((2.0 * static_cast<double>(j) - 1.0) * std::numbers::pi);
    d.t.push_back(tj);
    d.points.emplace_back(tj, j % 2 == 1 ? tj : -tj);
  }
  return d;
}

}  // namespace lgvar
