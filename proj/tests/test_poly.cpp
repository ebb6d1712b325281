#include <gtest/gtest.h>

#include <cmath>

#include "psp/poly.hpp"
#include "psp/random_graph.hpp"

using namespace psp;

namespace {

Rational q(const char* s) { return parse_rational(s); }

PolyWeight P(std::initializer_list<const char*> cs) {
  std::vector<Rational> v;
  for (const char* c : cs) v.push_back(q(c));
  return PolyWeight(std::move(v));
}

const ExtendedValue kNegInf = ExtendedValue::minus_infinity();
const ExtendedValue kPosInf = ExtendedValue::plus_infinity();

}  // namespace

TEST(Rational, ParsesAndFormatsCanonically) {
  EXPECT_EQ(format_rational(q("6/4")), "3/2");
  EXPECT_EQ(format_rational(q("-0.25")), "-1/4");
  EXPECT_EQ(format_rational(q("7")), "7");
  EXPECT_EQ(format_rational(q("2/-4")), "-1/2");
  EXPECT_THROW(q("1/0"), ParseError);
  EXPECT_THROW(q("abc"), ParseError);
  EXPECT_THROW(q(""), ParseError);
}

TEST(ExtendedValue, TotalOrder) {
  ExtendedValue a(q("-1000000")), b(q("3/2"));
  EXPECT_LT(kNegInf, a);
  EXPECT_LT(a, b);
  EXPECT_LT(b, kPosInf);
  EXPECT_EQ(kPosInf, kPosInf);
  EXPECT_EQ(a + kPosInf, kPosInf);
  EXPECT_EQ(a + kNegInf, kNegInf);
  EXPECT_EQ(format_extended(parse_extended("-inf")), "-inf");
  EXPECT_EQ(format_extended(parse_extended("+inf")), "+inf");
  EXPECT_THROW(kPosInf.value(), std::logic_error);
}

TEST(Evaluate, SmallCases) {
  EXPECT_EQ(evaluate(P({"1", "2"}), q("0")), 1);
  EXPECT_EQ(evaluate(P({"1", "2"}), q("3/2")), 4);
  EXPECT_EQ(evaluate(PolyWeight(), q("7")), 0);
}

TEST(PolyWeight, TrimsTrailingZeros) {
  PolyWeight p = P({"1", "0", "0"});
  EXPECT_EQ(p.degree(), 0);
  EXPECT_EQ(p.coefficients().size(), 1u);
  EXPECT_TRUE(P({"0", "0"}).is_zero());
  EXPECT_EQ(PolyWeight().degree(), 0);
  EXPECT_EQ(format_poly(P({"1", "-1/2"})), "1 -1/2");
  EXPECT_EQ(parse_poly("1 -1/2 0"), P({"1", "-1/2"}));
}

TEST(Evaluate, ExactAgainstMonomialSum) {
  SplitMix64 rng(11);
  for (int t = 0; t < 200; ++t) {
    std::vector<Rational> c(5);
    for (auto& x : c) x = random_rational(rng, {-50, 50, 7});
    Rational x = random_rational(rng, {-30, 30, 11});
    Rational expect = 0, power = 1;
    for (const auto& ck : c) {
      expect += ck * power;
      power *= x;
    }
    EXPECT_EQ(evaluate(PolyWeight(c), x), expect);
  }
}

TEST(Roots, SymmetricQuadratic) {
  auto r = roots_in_interval(P({"-1", "0", "1"}), kNegInf, kPosInf);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].value, -1);
  EXPECT_EQ(r[1].value, 1);
  EXPECT_TRUE(r[0].exact && r[1].exact);
}

TEST(Roots, LinearRootOutside) {
  EXPECT_TRUE(roots_in_interval(P({"1", "2"}), ExtendedValue(Rational(0)), kPosInf).empty());
}

TEST(Roots, CubeRootOfTwo) {
  Rational tol = pow10_inverse(9);
  auto r = roots_in_interval(P({"-2", "0", "0", "1"}), ExtendedValue(Rational(0)), ExtendedValue(Rational(2)), tol);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_FALSE(r[0].exact);
  EXPECT_NEAR(r[0].value.get_d(), std::cbrt(2.0), 1e-9);
  EXPECT_NEAR(r[0].value.get_d(), 1.259921049, 2e-9);
  // Sign change across the bracket.
  EXPECT_LT(sign_at(P({"-2", "0", "0", "1"}), r[0].value - tol), 0);
  EXPECT_GT(sign_at(P({"-2", "0", "0", "1"}), r[0].value + tol), 0);
}

TEST(Roots, ZeroPolynomialThrows) {
  EXPECT_THROW(roots_in_interval(PolyWeight(), kNegInf, kPosInf), IdenticallyZero);
}

TEST(Roots, RejectsBadArguments) {
  EXPECT_THROW(roots_in_interval(P({"1", "1"}), ExtendedValue(Rational(1)), ExtendedValue(Rational(1))),
               std::invalid_argument);
  EXPECT_THROW(roots_in_interval(P({"1", "1"}), kNegInf, kPosInf, Rational(0)), std::invalid_argument);
}

TEST(Roots, IrrationalQuadraticIsApproximate) {
  auto r = roots_in_interval(P({"-2", "0", "1"}), kNegInf, kPosInf);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_FALSE(r[0].exact);
  EXPECT_NEAR(r[1].value.get_d(), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r[0].value.get_d(), -std::sqrt(2.0), 1e-12);
}

TEST(Roots, DoubleRootIsFound) {
  // (x-1)^2 touches zero without a sign change.
  auto r = roots_in_interval(P({"1", "-2", "1"}), kNegInf, kPosInf);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].value, 1);
  EXPECT_TRUE(r[0].exact);
}

// Property: degree <= 2 roots agree with the direct formula (computed in
// doubles for the reference, compared with tolerance; exact roots must
// evaluate to exactly 0).
TEST(Roots, QuadraticsMatchClosedForm) {
  SplitMix64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    Rational c0 = random_rational(rng), c1 = random_rational(rng), c2 = random_rational(rng);
    PolyWeight p({c0, c1, c2});
    if (p.is_zero()) continue;
    auto roots = roots_in_interval(p, kNegInf, kPosInf);
    std::vector<double> expect;
    double a = c2.get_d(), b = c1.get_d(), c = c0.get_d();
    if (c2 == 0) {
      if (c1 != 0) expect.push_back(-c / b);
    } else {
      Rational disc = c1 * c1 - 4 * c2 * c0;
      if (disc == 0) {
        expect.push_back(-b / (2 * a));
      } else if (disc > 0) {
        double s = std::sqrt(disc.get_d());
        double r1 = (-b - s) / (2 * a), r2 = (-b + s) / (2 * a);
        expect.push_back(std::min(r1, r2));
        expect.push_back(std::max(r1, r2));
      }
    }
    ASSERT_EQ(roots.size(), expect.size()) << format_poly(p);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      EXPECT_NEAR(roots[i].value.get_d(), expect[i], 1e-9 * (1 + std::abs(expect[i])));
      if (roots[i].exact) {
        EXPECT_EQ(evaluate(p, roots[i].value), 0);
      }
      if (i > 0) {
        EXPECT_LT(roots[i - 1].value, roots[i].value);
      }
    }
  }
}

// Property: high-degree roots are increasing and bracket a sign change.
TEST(Roots, HighDegreeBracketsSignChanges) {
  SplitMix64 rng(9);
  Rational tol = pow10_inverse(10);
  for (int t = 0; t < 200; ++t) {
    std::vector<Rational> c(6);
    for (auto& x : c) x = random_rational(rng);
    PolyWeight p(c);
    if (p.is_zero()) continue;
    auto roots = roots_in_interval(p, kNegInf, kPosInf, tol);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (i > 0) {
        EXPECT_LT(roots[i - 1].value, roots[i].value);
      }
      if (roots[i].exact) {
        EXPECT_EQ(evaluate(p, roots[i].value), 0);
      } else {
        int lo = sign_at(p, roots[i].value - tol);
        int hi = sign_at(p, roots[i].value + tol);
        EXPECT_LE(lo * hi, 0) << format_poly(p);
      }
    }
  }
}

TEST(Compare, SmallCases) {
  auto x = P({"0", "1"});
  auto two_minus_x = P({"2", "-1"});
  EXPECT_EQ(compare_on_interval(x, two_minus_x, kNegInf, ExtendedValue(Rational(1))).kind,
            Comparison::PLessEverywhere);
  EXPECT_EQ(compare_on_interval(P({"5"}), P({"5"}), kNegInf, kPosInf).kind, Comparison::Equal);
  auto c = compare_on_interval(x, two_minus_x, ExtendedValue(Rational(0)), ExtendedValue(Rational(2)));
  ASSERT_EQ(c.kind, Comparison::Crossing);
  ASSERT_EQ(c.crossings.size(), 1u);
  EXPECT_EQ(c.crossings[0].value, 1);
  EXPECT_EQ(compare_on_interval(two_minus_x, x, kNegInf, ExtendedValue(Rational(1))).kind,
            Comparison::QLessEverywhere);
}
