#pragma once

// The closed interval [alpha, beta] of instantiations with no negative cycle,
// for linear edge weights. Endpoints are found by probing with Bellman-Ford
// and jumping to the root of each extracted cycle (Newton/Lawler iteration on
// cycle ratios), all in exact arithmetic.

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psp/shortest_path.hpp"

namespace psp {

struct FeasibleInterval {
  ExtendedValue alpha = ExtendedValue::minus_infinity();
  ExtendedValue beta = ExtendedValue::plus_infinity();
  /// Cycles whose weights vanish at a finite alpha / beta.
  std::optional<std::vector<EdgeId>> alpha_witness;
  std::optional<std::vector<EdgeId>> beta_witness;

  bool contains(const Rational& r) const {
    ExtendedValue x(r);
    return alpha <= x && x <= beta;
  }

  friend bool operator==(const FeasibleInterval&, const FeasibleInterval&) = default;
};

class NeverFeasible : public std::runtime_error {
 public:
  explicit NeverFeasible(std::vector<EdgeId> witness)
      : std::runtime_error("graph has a negative cycle at every instantiation"), witness_(std::move(witness)) {}

  /// A cycle that is negative on the current candidate bracket.
  const std::vector<EdgeId>& witness() const { return witness_; }

 private:
  std::vector<EdgeId> witness_;
};

class NotACycle : public std::invalid_argument {
 public:
  NotACycle() : std::invalid_argument("edge sequence is not a closed walk") {}
};

/// Sum of the edge polynomials of a closed walk.
inline PolyWeight cycle_weight(const ParametricGraph& g, const std::vector<EdgeId>& cycle) {
  if (cycle.empty()) throw NotACycle();
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const auto& e = g.edge(cycle[i]);
    const auto& next = g.edge(cycle[(i + 1) % cycle.size()]);
    if (e.dst != next.src) throw NotACycle();
  }
  return path_weight(g, cycle);
}

/// A magnitude beyond every cycle root. A simple cycle has at most n edges, so
/// its intercept B satisfies |B| <= n * max|b_e|, and a nonzero slope A is a
/// multiple of 1/L with L the lcm of all slope denominators, so |A| >= 1/L.
/// Hence |root| = |B| / |A| <= n * max|b_e| * L < M.
inline Rational infinity_probe_bound(const ParametricGraph& g) {
  Rational max_b = 0;
  Integer lcm = 1;
  for (const auto& e : g.edges()) {
    max_b = std::max(max_b, abs_value(e.weight.intercept()));
    Rational a = e.weight.slope();
    if (a != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a.get_den_mpz_t());
  }
  return Rational(1) + Rational(static_cast<long>(g.vertex_count())) * max_b * Rational(lcm);
}

namespace detail {

struct Probe {
  bool feasible = true;
  std::vector<EdgeId> cycle;
  Rational slope;
  Rational intercept;
};

inline Probe probe_at(const ParametricGraph& g, const Rational& r) {
  auto res = bellman_ford_virtual_source(instantiate(g, r));
  Probe p;
  if (auto* cyc = std::get_if<NegativeCycle>(&res)) {
    p.feasible = false;
    p.cycle = std::move(cyc->edges);
    PolyWeight w = cycle_weight(g, p.cycle);
    p.slope = w.slope();
    p.intercept = w.intercept();
  }
  return p;
}

}  // namespace detail

/// Exact [alpha, beta]. Throws NeverFeasible when every instantiation has a
/// negative cycle (a constant negative cycle, or alpha > beta).
inline FeasibleInterval compute_interval(const ParametricGraph& g) {
  if (g.degree_bound() > 1) throw std::invalid_argument("compute_interval: weights must be linear");
  FeasibleInterval out;

  // Phase 1: find some feasible r. Each negative cycle at r moves the probe to
  // its root; a cycle negative at a candidate endpoint whose slope points the
  // other way proves the bracket empty.
  Rational r = 0;
  int direction = 0;  // +1 after raising alpha, -1 after lowering beta
  while (true) {
    auto p = detail::probe_at(g, r);
    if (p.feasible) break;
    if (p.slope == 0) throw NeverFeasible(p.cycle);
    Rational root = -p.intercept / p.slope;
    if (p.slope > 0) {
      if (direction < 0) throw NeverFeasible(p.cycle);
      out.alpha = root;
      out.alpha_witness = p.cycle;
      direction = 1;
    } else {
      if (direction > 0) throw NeverFeasible(p.cycle);
      out.beta = root;
      out.beta_witness = p.cycle;
      direction = -1;
    }
    r = root;
  }
  const Rational feasible_point = r;
  const Rational far = infinity_probe_bound(g);

  // Phase 2: push each side to its true endpoint. Starting from a candidate
  // endpoint that is already feasible, it is the endpoint.
  auto settle = [&](bool lower) {
    ExtendedValue& end = lower ? out.alpha : out.beta;
    auto& witness = lower ? out.alpha_witness : out.beta_witness;
    if (end.is_finite() && end.value() == feasible_point) return;
    Rational at = end.is_finite() ? end.value() : (lower ? Rational(-far) : far);
    while (true) {
      auto p = detail::probe_at(g, at);
      if (p.feasible) {
        if (!end.is_finite()) return;  // feasible beyond every root
        end = at;
        return;
      }
      // Feasibility at feasible_point forces the slope's sign here.
      if (lower ? !(p.slope > 0) : !(p.slope < 0)) throw std::logic_error("compute_interval: inconsistent probe");
      at = -p.intercept / p.slope;
      end = at;
      witness = p.cycle;
    }
  };
  settle(true);
  settle(false);
  return out;
}

}  // namespace psp
