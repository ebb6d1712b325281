#pragma once

// Seeded generators for test and benchmark graphs.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "psp/graph.hpp"

namespace psp {

/// splitmix64: a 64-bit splittable generator. The seed and the number of
/// draws fully determine the output.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound); rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below: empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// An independent stream.
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

struct RationalRange {
  std::int64_t num_lo = -9;
  std::int64_t num_hi = 9;
  std::int64_t den_max = 4;
};

inline Rational random_rational(SplitMix64& rng, const RationalRange& spec = {}) {
  Rational r(Integer(static_cast<long>(rng.between(spec.num_lo, spec.num_hi))),
             Integer(static_cast<long>(rng.between(1, spec.den_max))));
  r.canonicalize();
  return r;
}

/// Rational in [lo, hi] on a grid of step (hi - lo) / steps.
inline Rational random_between(SplitMix64& rng, const Rational& lo, const Rational& hi, std::int64_t steps = 1000) {
  Rational t(Integer(static_cast<long>(rng.between(0, steps))), Integer(static_cast<long>(steps)));
  t.canonicalize();
  return lo + (hi - lo) * t;
}

inline std::vector<ParametricEdge> random_endpoints(SplitMix64& rng, std::size_t n, std::size_t m) {
  std::vector<ParametricEdge> edges(m);
  for (auto& e : edges) {
    e.src = static_cast<Vertex>(rng.below(n));
    e.dst = static_cast<Vertex>(rng.below(n));
  }
  return edges;
}

/// Arbitrary coefficients of degree <= d; negative cycles are likely.
inline ParametricGraph random_poly_graph(SplitMix64& rng, std::size_t n, std::size_t m, int degree,
                                         const RationalRange& spec = {}) {
  auto edges = random_endpoints(rng, n, m);
  for (auto& e : edges) {
    std::vector<Rational> c(static_cast<std::size_t>(degree) + 1);
    for (auto& x : c) x = random_rational(rng, spec);
    e.weight = PolyWeight(std::move(c));
  }
  return ParametricGraph(n, std::move(edges));
}

inline ParametricGraph random_linear_graph(SplitMix64& rng, std::size_t n, std::size_t m,
                                           const RationalRange& spec = {}) {
  return random_poly_graph(rng, n, m, 1, spec);
}

/// Linear weights a*x + c + pi(u) - pi(v) with a*x + c >= 0 on [lo, hi]: every
/// cycle is nonnegative there, while single edges are often negative.
inline ParametricGraph random_feasible_linear_graph(SplitMix64& rng, std::size_t n, std::size_t m, const Rational& lo,
                                                    const Rational& hi, const RationalRange& slope = {-1, 1, 4},
                                                    const RationalRange& offset = {0, 9, 4}) {
  std::vector<Rational> pi(n);
  for (auto& p : pi) p = random_rational(rng, {-9, 9, 2});
  auto edges = random_endpoints(rng, n, m);
  for (auto& e : edges) {
    Rational a = random_rational(rng, slope);
    Rational floor_c = std::max(Rational(-a * lo), Rational(-a * hi));
    Rational c = floor_c + random_rational(rng, offset) + pi[e.src] - pi[e.dst];
    e.weight = PolyWeight::linear(c, a);
  }
  return ParametricGraph(n, std::move(edges));
}

}  // namespace psp
