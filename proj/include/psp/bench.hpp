#pragma once

// Timing harness: a precomputed query path against Bellman-Ford from scratch
// on the same seeded trial set.

#include <chrono>
#include <cstdint>
#include <vector>

#include "psp/random_graph.hpp"
#include "psp/shortest_path.hpp"

namespace psp {

struct BenchTrial {
  Vertex source = 0;
  Vertex target = 0;
  Rational r;
};

struct BenchReport {
  std::size_t trials = 0;
  double fast_mean_us = 0;
  double scratch_mean_us = 0;
  /// Folded query results, so the timed calls stay observable.
  std::size_t checksum = 0;

  double speedup() const { return fast_mean_us > 0 ? scratch_mean_us / fast_mean_us : 0; }
};

/// A finite window inside [lo, hi]: the interval itself when finite, else
/// width units from the finite end (or centred on 0).
inline std::pair<Rational, Rational> finite_window(const ExtendedValue& lo, const ExtendedValue& hi,
                                                   const Rational& width = 10) {
  if (lo.is_finite() && hi.is_finite()) return {lo.value(), hi.value()};
  if (lo.is_finite()) return {lo.value(), lo.value() + width};
  if (hi.is_finite()) return {hi.value() - width, hi.value()};
  return {-width / 2, width / 2};
}

inline std::vector<BenchTrial> bench_trials(std::size_t n, std::size_t count, std::uint64_t seed, const Rational& lo,
                                            const Rational& hi) {
  SplitMix64 rng(seed);
  std::vector<BenchTrial> out;
  if (n == 0) return out;
  for (std::size_t k = 0; k < count; ++k) {
    BenchTrial t;
    t.source = static_cast<Vertex>(rng.below(n));
    t.target = static_cast<Vertex>(rng.below(n));
    t.r = random_between(rng, lo, hi);
    out.push_back(std::move(t));
  }
  return out;
}

/// fast(trial) is timed against instantiate + bellman_ford from trial.source.
template <class Fast>
BenchReport run_bench(const ParametricGraph& g, const std::vector<BenchTrial>& trials, Fast&& fast) {
  using clock = std::chrono::steady_clock;
  BenchReport rep;
  rep.trials = trials.size();
  if (trials.empty()) return rep;
  std::size_t sink = 0;
  clock::duration fast_total{}, scratch_total{};
  for (const auto& t : trials) {
    auto a = clock::now();
    sink += fast(t);
    auto b = clock::now();
    auto res = bellman_ford(instantiate(g, t.r), t.source);
    sink += res.index();
    auto c = clock::now();
    fast_total += b - a;
    scratch_total += c - b;
  }
  rep.checksum = sink;
  auto us = [&](clock::duration d) {
    return std::chrono::duration<double, std::micro>(d).count() / static_cast<double>(trials.size());
  };
  rep.fast_mean_us = us(fast_total);
  rep.scratch_mean_us = us(scratch_total);
  return rep;
}

}  // namespace psp
