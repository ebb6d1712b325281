#pragma once

// Exact scalars: GMP rationals plus a three-state extended value (-inf, finite, +inf).

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

namespace psp {

using Rational = mpq_class;
using Integer = mpz_class;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p/q", an integer, or a plain decimal ("-0.25", "1e-3" is not accepted).
/// The result is always canonical.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational");
  if (s.front() == '+') s.erase(0, 1);
  auto dot = s.find('.');
  Rational r;
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw ParseError("bad rational: " + std::string(text));
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (negative) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    if (frac.empty()) frac = "0";
    for (char c : whole + frac) {
      if (c < '0' || c > '9') throw ParseError("bad rational: " + std::string(text));
    }
    Integer num(whole + frac, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    r = Rational(num, den);
    if (negative) r = -r;
  } else {
    for (std::size_t i = 0; i < s.size(); ++i) {
      char c = s[i];
      bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && (i == 0 || s[i - 1] == '/'));
      if (!ok) throw ParseError("bad rational: " + std::string(text));
    }
    if (s.back() == '/' || s.back() == '-') throw ParseError("bad rational: " + std::string(text));
    if (r.set_str(s, 10) != 0) throw ParseError("bad rational: " + std::string(text));
    if (r.get_den() == 0) throw ParseError("zero denominator: " + std::string(text));
  }
  r.canonicalize();
  return r;
}

/// "p/q", with "/q" omitted when q == 1.
inline std::string format_rational(const Rational& r) { return r.get_str(); }

inline Rational abs_value(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline int sign_of(const Rational& r) { return sgn(r); }

/// Smallest integer >= r.
inline Integer ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

/// Largest integer <= r.
inline Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Rational pow10_inverse(unsigned digits) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, digits);
  return Rational(Integer(1), den);
}

/// Default bracket width for irrational roots.
inline Rational default_root_tolerance() { return pow10_inverse(12); }

/// A value of T extended with -inf and +inf. Ordering is total: -inf < finite < +inf.
template <class T>
class Extended {
 public:
  enum class Kind : std::uint8_t { MinusInfinity, Finite, PlusInfinity };

  Extended() : kind_(Kind::PlusInfinity), value_() {}
  Extended(T value) : kind_(Kind::Finite), value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)

  static Extended plus_infinity() { return Extended(Kind::PlusInfinity); }
  static Extended minus_infinity() { return Extended(Kind::MinusInfinity); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_plus_infinity() const { return kind_ == Kind::PlusInfinity; }
  bool is_minus_infinity() const { return kind_ == Kind::MinusInfinity; }

  const T& value() const {
    if (kind_ != Kind::Finite) throw std::logic_error("Extended::value on infinite value");
    return value_;
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::Finite || a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (a.kind_ != Kind::Finite) return std::strong_ordering::equal;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// +inf absorbs everything; otherwise -inf dominates finite values.
  friend Extended operator+(const Extended& a, const Extended& b) {
    if (a.is_plus_infinity() || b.is_plus_infinity()) return plus_infinity();
    if (a.is_minus_infinity() || b.is_minus_infinity()) return minus_infinity();
    return Extended(T(a.value_ + b.value_));
  }

 private:
  explicit Extended(Kind k) : kind_(k), value_() {}

  Kind kind_;
  T value_;
};

using ExtendedValue = Extended<Rational>;

template <class T>
std::string format_extended(const Extended<T>& v) {
  if (v.is_plus_infinity()) return "+inf";
  if (v.is_minus_infinity()) return "-inf";
  if constexpr (std::is_same_v<T, Rational>) {
    return format_rational(v.value());
  } else {
    return std::to_string(v.value());
  }
}

inline ExtendedValue parse_extended(std::string_view text) {
  if (text == "+inf" || text == "inf") return ExtendedValue::plus_infinity();
  if (text == "-inf") return ExtendedValue::minus_infinity();
  return ExtendedValue(parse_rational(text));
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Extended<T>& v) {
  return os << format_extended(v);
}

}  // namespace psp
