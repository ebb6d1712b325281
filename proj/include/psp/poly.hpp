#pragma once

// Single-variable polynomials with exact rational coefficients, and the root
// machinery the envelope merges are built on.

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "psp/rational.hpp"

namespace psp {

/// Polynomial in x; coefficient k multiplies x^k. Trailing zeros are trimmed, so
/// two polynomials are equal iff their coefficient vectors are equal.
class PolyWeight {
 public:
  PolyWeight() = default;

  explicit PolyWeight(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static PolyWeight constant(Rational c) { return PolyWeight(std::vector<Rational>{std::move(c)}); }

  static PolyWeight linear(Rational intercept, Rational slope) {
    return PolyWeight(std::vector<Rational>{std::move(intercept), std::move(slope)});
  }

  bool is_zero() const { return coeffs_.empty(); }

  /// Highest nonzero index; the zero polynomial has degree 0.
  int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }

  const std::vector<Rational>& coefficients() const { return coeffs_; }

  Rational coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

  Rational intercept() const { return coefficient(0); }
  Rational slope() const { return coefficient(1); }

  Rational leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }

  PolyWeight derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
    return PolyWeight(std::move(d));
  }

  PolyWeight& operator+=(const PolyWeight& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }

  PolyWeight& operator-=(const PolyWeight& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }

  friend PolyWeight operator+(PolyWeight a, const PolyWeight& b) { return a += b; }
  friend PolyWeight operator-(PolyWeight a, const PolyWeight& b) { return a -= b; }

  friend PolyWeight operator-(PolyWeight a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }

  friend PolyWeight operator*(PolyWeight a, const Rational& s) {
    for (auto& c : a.coeffs_) c *= s;
    a.trim();
    return a;
  }

  friend bool operator==(const PolyWeight& a, const PolyWeight& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

/// Exact Horner evaluation.
inline Rational evaluate(const PolyWeight& p, const Rational& x) {
  const auto& c = p.coefficients();
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

inline double evaluate_double(const PolyWeight& p, double x) {
  const auto& c = p.coefficients();
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

inline int sign_at(const PolyWeight& p, const Rational& x) { return sgn(evaluate(p, x)); }

/// Space-separated coefficients, constant term first. The zero polynomial is "0".
inline std::string format_poly(const PolyWeight& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& c : p.coefficients()) {
    if (!out.empty()) out += ' ';
    out += format_rational(c);
  }
  return out;
}

inline PolyWeight parse_poly(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<Rational> coeffs;
  std::string tok;
  while (in >> tok) coeffs.push_back(parse_rational(tok));
  if (coeffs.empty()) throw ParseError("empty polynomial");
  return PolyWeight(std::move(coeffs));
}

class IdenticallyZero : public std::domain_error {
 public:
  IdenticallyZero() : std::domain_error("zero polynomial has infinitely many roots") {}
};

struct Root {
  Rational value;
  /// false: value is the midpoint of a sign-change bracket no wider than the tolerance.
  bool exact = true;

  friend bool operator==(const Root&, const Root&) = default;
};

namespace detail {

/// 1 + max |c_k / c_d|; every real root lies strictly inside (-bound, bound).
inline Rational cauchy_bound(const PolyWeight& p) {
  const auto& c = p.coefficients();
  Rational lead = abs_value(c.back());
  Rational best = 0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) best = std::max(best, Rational(abs_value(c[k]) / lead));
  return best + 1;
}

inline bool strictly_inside(const Rational& x, const ExtendedValue& lo, const ExtendedValue& hi) {
  ExtendedValue ex(x);
  return lo < ex && ex < hi;
}

inline bool rational_sqrt(const Rational& q, Rational& out) {
  if (q < 0) return false;
  if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0) return false;
  Integer num, den;
  mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
  out = Rational(num, den);
  out.canonicalize();
  return true;
}

// Roots inside the finite open interval (a, b), any degree >= 1. Critical
// points come from the derivative's roots; between consecutive critical points
// p is monotone, so a sign change brackets exactly one root.
inline std::vector<Root> isolate_by_bisection(const PolyWeight& p, const Rational& a, const Rational& b,
                                              const Rational& tol) {
  std::vector<Root> roots;
  if (!(a < b)) return roots;
  if (p.degree() == 1) {
    Rational r = -p.intercept() / p.slope();
    if (a < r && r < b) roots.push_back({r, true});
    return roots;
  }
  std::vector<Rational> points{a};
  for (const auto& c : isolate_by_bisection(p.derivative(), a, b, tol)) points.push_back(c.value);
  points.push_back(b);

  for (std::size_t k = 1; k + 1 < points.size(); ++k) {
    if (sign_at(p, points[k]) == 0) roots.push_back({points[k], true});
  }
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    Rational lo = points[k];
    Rational hi = points[k + 1];
    int slo = sign_at(p, lo);
    int shi = sign_at(p, hi);
    if (slo == 0 || shi == 0 || slo == shi) continue;
    bool hit = false;
    while (hi - lo > tol) {
      Rational mid = (lo + hi) / 2;
      int smid = sign_at(p, mid);
      if (smid == 0) {
        roots.push_back({mid, true});
        hit = true;
        break;
      }
      if (smid == slo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!hit) roots.push_back({Rational((lo + hi) / 2), false});
  }
  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.value < y.value; });
  return roots;
}

}  // namespace detail

/// Real roots of p strictly inside (lo, hi), increasing. Degrees 1 and 2 with a
/// rational discriminant root are solved in closed form; everything else is
/// bracketed and bisected to width <= tol.
inline std::vector<Root> roots_in_interval(const PolyWeight& p, const ExtendedValue& lo, const ExtendedValue& hi,
                                           const Rational& tol = default_root_tolerance()) {
  if (!(lo < hi)) throw std::invalid_argument("roots_in_interval: empty interval");
  if (!(tol > 0)) throw std::invalid_argument("roots_in_interval: tolerance must be positive");
  if (p.is_zero()) throw IdenticallyZero();
  std::vector<Root> out;
  const int d = p.degree();
  if (d == 0) return out;
  if (d == 1) {
    Rational r = -p.intercept() / p.slope();
    if (detail::strictly_inside(r, lo, hi)) out.push_back({r, true});
    return out;
  }
  if (d == 2) {
    const Rational& c = p.coefficients()[0];
    const Rational& b = p.coefficients()[1];
    const Rational& a = p.coefficients()[2];
    Rational disc = b * b - 4 * a * c;
    if (disc < 0) return out;
    Rational s;
    if (detail::rational_sqrt(disc, s)) {
      Rational r1 = (-b - s) / (2 * a);
      Rational r2 = (-b + s) / (2 * a);
      if (r2 < r1) std::swap(r1, r2);
      if (detail::strictly_inside(r1, lo, hi)) out.push_back({r1, true});
      if (r2 != r1 && detail::strictly_inside(r2, lo, hi)) out.push_back({r2, true});
      return out;
    }
  }
  Rational bound = detail::cauchy_bound(p);
  Rational a = lo.is_finite() ? std::max(lo.value(), Rational(-bound)) : Rational(-bound);
  Rational b = hi.is_finite() ? std::min(hi.value(), bound) : bound;
  for (auto& r : detail::isolate_by_bisection(p, a, b, tol)) {
    if (detail::strictly_inside(r.value, lo, hi)) out.push_back(std::move(r));
  }
  return out;
}

/// A point strictly inside (lo, hi): the midpoint, or one unit in from the
/// finite end of a half-line, or 0 for the whole line.
inline Rational interior_point(const ExtendedValue& lo, const ExtendedValue& hi) {
  if (lo.is_finite() && hi.is_finite()) return (lo.value() + hi.value()) / 2;
  if (lo.is_finite()) return lo.value() + 1;
  if (hi.is_finite()) return hi.value() - 1;
  return 0;
}

enum class Comparison { PLessEverywhere, QLessEverywhere, Equal, Crossing };

struct CompareResult {
  Comparison kind = Comparison::Equal;
  std::vector<Root> crossings;
};

/// Classifies p against q on (lo, hi). Equal iff p - q is the zero polynomial.
inline CompareResult compare_on_interval(const PolyWeight& p, const PolyWeight& q, const ExtendedValue& lo,
                                         const ExtendedValue& hi, const Rational& tol = default_root_tolerance()) {
  PolyWeight diff = p - q;
  if (diff.is_zero()) return {Comparison::Equal, {}};
  auto roots = roots_in_interval(diff, lo, hi, tol);
  if (!roots.empty()) return {Comparison::Crossing, std::move(roots)};
  // Even-multiplicity roots of high degree may escape bisection; nudge the
  // sample until it lands off them.
  Rational x = interior_point(lo, hi);
  int s = sign_at(diff, x);
  for (int tries = 0; s == 0 && tries < 64; ++tries) {
    x = interior_point(lo, ExtendedValue(x));
    s = sign_at(diff, x);
  }
  return {s < 0 ? Comparison::PLessEverywhere : Comparison::QLessEverywhere, {}};
}

}  // namespace psp
