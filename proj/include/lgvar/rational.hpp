#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>

#include "lgvar/errors.hpp"

namespace lgvar {

/// Exact arbitrary-precision rational number, always kept in canonical form.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(mpq_class value) : v_(std::move(value)) { v_.canonicalize(); }

  /// Accepts "p/q", integers and decimal literals ("-1.25", "3e-2"), converted exactly.
  static Rational parse(std::string_view text);

  /// The exact binary value of a finite double.
  static Rational from_double(double value) {
    if (!std::isfinite(value)) throw DomainError("non-finite value has no rational form");
    return Rational(mpq_class(value));
  }

  /// Nearest double, ties to even.
  [[nodiscard]] double to_double() const {
    const mpz_class& num = v_.get_num();
    const mpz_class& den = v_.get_den();
    if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 53) {
      return num.get_d() / den.get_d();  // both exact, one rounding
    }
    const double d = v_.get_d();  // truncated toward zero
    if (!std::isfinite(d)) return d;
    const mpq_class dq(d);
    const int c = cmp(v_, dq);
    if (c == 0) return d;
    const double away = std::nextafter(d, c > 0 ? HUGE_VAL : -HUGE_VAL);
    if (!std::isfinite(away)) return d;
    const int m = cmp(v_, (dq + mpq_class(away)) / 2) * c;
    if (m < 0) return d;
    if (m > 0) return away;
    std::int64_t bits = 0;
    std::memcpy(&bits, &d, sizeof bits);
    return (bits & 1) == 0 ? d : away;
  }
  [[nodiscard]] std::string to_string() const { return v_.get_str(); }
  [[nodiscard]] int sign() const { return sgn(v_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] const mpq_class& raw() const { return v_; }
  [[nodiscard]] Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  /// Numerator and denominator when both fit in |value| < 2^bits.
  [[nodiscard]] std::optional<std::pair<std::int64_t, std::int64_t>> small_parts(unsigned bits) const {
    const mpz_class& n = v_.get_num();
    const mpz_class& d = v_.get_den();
    if (mpz_sizeinbase(n.get_mpz_t(), 2) >= bits || mpz_sizeinbase(d.get_mpz_t(), 2) >= bits) {
      return std::nullopt;
    }
    return std::pair<std::int64_t, std::int64_t>{n.get_si(), d.get_si()};
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw ParseError("malformed rational: '" + std::string(text) + "'");
  };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) return fail();

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) return fail();
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) return fail();
    mpq_class q(n, d);
    q.canonicalize();
    if (negative) q = -q;
    return Rational(q);
  }

  // decimal literal: digits [. digits] [e|E [+-] digits]
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!detail::all_digits(exp_text) || exp_text.size() > 6) return fail();
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto int_part = s.substr(0, dot);
    const auto frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) return fail();
    if ((!int_part.empty() && !detail::all_digits(int_part)) ||
        (!frac_part.empty() && !detail::all_digits(frac_part))) {
      return fail();
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!detail::all_digits(s)) return fail();
    digits = std::string(s);
  }
  if (digits.empty()) return fail();
  mpq_class q(mpz_class(digits, 10));
  if (exponent > 0) {
    q *= mpq_class(detail::pow10(static_cast<unsigned long>(exponent)));
  } else if (exponent < 0) {
    q /= mpq_class(detail::pow10(static_cast<unsigned long>(-exponent)));
  }
  q.canonicalize();
  if (negative) q = -q;
  return Rational(q);
}

}  // namespace lgvar
