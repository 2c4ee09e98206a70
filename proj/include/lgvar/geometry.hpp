#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <variant>

#include "lgvar/errors.hpp"
#include "lgvar/rational.hpp"

namespace lgvar {

struct Point2 {
  Rational x;
  Rational y;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend std::strong_ordering operator<=>(const Point2& a, const Point2& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
  friend Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(const Rational& k, const Point2& p) { return {k * p.x, k * p.y}; }
  friend std::ostream& operator<<(std::ostream& os, const Point2& p) {
    return os << '(' << p.x.to_string() << ", " << p.y.to_string() << ')';
  }
};

inline Rational cross(const Point2& u, const Point2& v) { return u.x * v.y - u.y * v.x; }
inline Rational dot(const Point2& u, const Point2& v) { return u.x * v.x + u.y * v.y; }
inline Point2 perp(const Point2& d) { return {-d.y, d.x}; }

/// Sign of (q - p) x (r - p): +1 when r is left of the directed line p->q.
inline int orientation(const Point2& p, const Point2& q, const Point2& r) {
  return cross(q - p, r - p).sign();
}

/// Closed segment [a, b]; zero-length segments are rejected.
class Segment {
 public:
  Segment(Point2 a, Point2 b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_ == b_) throw DomainError("degenerate segment");
  }
  [[nodiscard]] const Point2& a() const { return a_; }
  [[nodiscard]] const Point2& b() const { return b_; }
  [[nodiscard]] Point2 direction() const { return b_ - a_; }
  [[nodiscard]] Segment reversed() const { return {b_, a_}; }

  friend bool operator==(const Segment&, const Segment&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Segment& s) {
    return os << '[' << s.a_ << ", " << s.b_ << ']';
  }

 private:
  Point2 a_;
  Point2 b_;
};

enum class Side { Left, On, Right };

inline Side side_from_sign(int s) { return s > 0 ? Side::Left : (s < 0 ? Side::Right : Side::On); }

/// The line {anchor + t * direction}. Equality compares point sets.
class Line {
 public:
  Line(Point2 anchor, Point2 direction) : anchor_(std::move(anchor)), direction_(std::move(direction)) {
    if (direction_.x.is_zero() && direction_.y.is_zero()) throw DomainError("line with zero direction");
  }
  static Line through(const Point2& p, const Point2& q) { return {p, q - p}; }

  [[nodiscard]] const Point2& anchor() const { return anchor_; }
  [[nodiscard]] const Point2& direction() const { return direction_; }
  [[nodiscard]] Line reversed() const { return {anchor_, {-direction_.x, -direction_.y}}; }

  friend bool operator==(const Line& l, const Line& m) {
    return cross(l.direction_, m.direction_).is_zero() &&
           cross(l.direction_, m.anchor_ - l.anchor_).is_zero();
  }

 private:
  Point2 anchor_;
  Point2 direction_;
};

inline Side side_of_line(const Point2& p, const Line& line) {
  return side_from_sign(cross(line.direction(), p - line.anchor()).sign());
}

/// Exact parameter of p along s when p lies on s.
inline std::optional<Rational> param_of(const Segment& s, const Point2& p) {
  const Point2 d = s.direction();
  if (!cross(d, p - s.a()).is_zero()) return std::nullopt;
  Rational t = d.x.is_zero() ? (p.y - s.a().y) / d.y : (p.x - s.a().x) / d.x;
  if (t.sign() < 0 || t > Rational(1)) return std::nullopt;
  return t;
}

inline bool on_segment(const Point2& p, const Segment& s) { return param_of(s, p).has_value(); }

/// (1 - t) a + t b, exactly.
inline Point2 param_point(const Segment& s, const Rational& t) {
  if (t.sign() < 0 || t > Rational(1)) throw DomainError("segment parameter outside [0, 1]");
  return s.a() + t * s.direction();
}

struct NoIntersection {
  friend bool operator==(const NoIntersection&, const NoIntersection&) = default;
};
struct PointIntersection {
  Point2 point;
  friend bool operator==(const PointIntersection&, const PointIntersection&) = default;
};
struct OverlapIntersection {
  Segment overlap;  // endpoints in lexicographic order
  friend bool operator==(const OverlapIntersection&, const OverlapIntersection&) = default;
};
using Intersection = std::variant<NoIntersection, PointIntersection, OverlapIntersection>;

inline Intersection segment_intersection(const Segment& s1, const Segment& s2) {
  const int o1 = orientation(s1.a(), s1.b(), s2.a());
  const int o2 = orientation(s1.a(), s1.b(), s2.b());
  if (o1 == 0 && o2 == 0) {
    // Collinear: intersect parameter intervals along s1.
    const Point2 d = s1.direction();
    auto param = [&](const Point2& p) {
      return d.x.is_zero() ? (p.y - s1.a().y) / d.y : (p.x - s1.a().x) / d.x;
    };
    const Rational u = param(s2.a());
    const Rational v = param(s2.b());
    const Rational lo = max(Rational(0), min(u, v));
    const Rational hi = min(Rational(1), max(u, v));
    if (hi < lo) return NoIntersection{};
    if (hi == lo) return PointIntersection{param_point(s1, lo)};
    Point2 p = param_point(s1, lo);
    Point2 q = param_point(s1, hi);
    if (q < p) std::swap(p, q);
    return OverlapIntersection{Segment(p, q)};
  }
  const int o3 = orientation(s2.a(), s2.b(), s1.a());
  const int o4 = orientation(s2.a(), s2.b(), s1.b());
  if (o1 * o2 > 0 || o3 * o4 > 0) return NoIntersection{};
  const Point2 d1 = s1.direction();
  const Point2 d2 = s2.direction();
  const Rational t = cross(s2.a() - s1.a(), d2) / cross(d1, d2);
  return PointIntersection{s1.a() + t * d1};
}

enum class Orientation { Forward, Reversed };

/// Affine bijection between two segments: Forward sends source.a -> target.a.
struct AffineSegMap {
  Segment source;
  Segment target;
  Orientation orientation = Orientation::Forward;

  [[nodiscard]] AffineSegMap inverse() const { return {target, source, orientation}; }
  /// Parameter on target of the image of the source point with parameter t.
  [[nodiscard]] Rational map_param(const Rational& t) const {
    return orientation == Orientation::Forward ? t : Rational(1) - t;
  }
};

inline Point2 affine_map(const AffineSegMap& m, const Point2& p) {
  const auto t = param_of(m.source, p);
  if (!t) throw DomainError("point is not on the source segment of the affine map");
  return param_point(m.target, m.map_param(*t));
}

}  // namespace lgvar
