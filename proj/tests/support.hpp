#pragma once

// Shared generators for envelope tests.

#include <algorithm>
#include <set>
#include <vector>

#include "psp/minbase.hpp"
#include "psp/random_graph.hpp"

namespace psp::fixtures {

/// A continuous piecewise-linear MinBase with t breaks at distinct rationals
/// and a slope change at every break.
inline MinBase random_linear_minbase(SplitMix64& rng, std::size_t t) {
  std::set<Rational> at;
  while (at.size() < t) at.insert(random_rational(rng, {-40, 40, 4}));
  std::vector<Break> breaks;
  for (const auto& a : at) breaks.push_back({a, 0});
  std::vector<Piece> pieces{Piece::of(PolyWeight::linear(random_rational(rng), random_rational(rng)))};
  for (const auto& b : breaks) {
    const PolyWeight& prev = pieces.back().poly;
    Rational slope;
    do {
      slope = random_rational(rng);
    } while (slope == prev.slope());
    pieces.push_back(Piece::of(PolyWeight::linear(evaluate(prev, b.at) - slope * b.at, slope)));
  }
  return MinBase(std::move(breaks), std::move(pieces));
}

/// Sample points: every break, points either side of each break, and random
/// points across the break range.
inline std::vector<Rational> probe_points(SplitMix64& rng, const std::vector<const MinBase*>& bases, std::size_t extra) {
  std::vector<Rational> rs;
  Rational lo = -50, hi = 50;
  for (const MinBase* b : bases) {
    for (const auto& br : b->breaks()) {
      rs.push_back(br.at);
      rs.push_back(br.at - Rational(1, 1000));
      rs.push_back(br.at + Rational(1, 1000));
      lo = std::min(lo, Rational(br.at - 1));
      hi = std::max(hi, Rational(br.at + 1));
    }
  }
  for (std::size_t k = 0; k < extra; ++k) rs.push_back(random_between(rng, lo, hi, 100000));
  return rs;
}

}  // namespace psp::fixtures
