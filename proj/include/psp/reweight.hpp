#pragma once

// Per-vertex linear potentials g_v that make every edge weight
// W(u,v)(r) + g_u(r) - g_v(r) nonnegative for all r in a feasible interval.
// Two Bellman-Ford passes per family; nothing is recomputed per r.

#include <stdexcept>
#include <utility>
#include <vector>

#include "psp/feasibility.hpp"

namespace psp {

struct LinearFn {
  Rational slope;
  Rational intercept;

  Rational at(const Rational& x) const { return slope * x + intercept; }
  PolyWeight as_poly() const { return PolyWeight::linear(intercept, slope); }

  friend bool operator==(const LinearFn&, const LinearFn&) = default;
};

/// One family of vertex potentials and the closed interval it is valid on.
struct VertexPotential {
  std::vector<LinearFn> g;
  ExtendedValue lo = ExtendedValue::minus_infinity();
  ExtendedValue hi = ExtendedValue::plus_infinity();

  bool covers(const Rational& r) const {
    ExtendedValue x(r);
    return lo <= x && x <= hi;
  }

  friend bool operator==(const VertexPotential&, const VertexPotential&) = default;
};

enum class Direction { PlusInfinity, MinusInfinity };

class NegativeCycleAtEndpoint : public std::runtime_error {
 public:
  explicit NegativeCycleAtEndpoint(const Rational& at)
      : std::runtime_error("negative cycle at interval endpoint " + format_rational(at)) {}
};

class SlopeGraphNegativeCycle : public std::runtime_error {
 public:
  SlopeGraphNegativeCycle() : std::runtime_error("slope graph has a negative cycle; interval is bounded on that side") {}
};

/// W(e) + g_src - g_dst as a linear polynomial.
inline PolyWeight reweighted_edge(const ParametricGraph& g, const VertexPotential& pot, EdgeId id) {
  const auto& e = g.edge(id);
  return e.weight + pot.g[e.src].as_poly() - pot.g[e.dst].as_poly();
}

namespace detail {

inline std::vector<Rational> potentials_at(const ParametricGraph& g, const Rational& r) {
  auto res = bellman_ford_virtual_source(instantiate(g, r));
  if (std::holds_alternative<NegativeCycle>(res)) throw NegativeCycleAtEndpoint(r);
  return std::get<std::vector<Rational>>(std::move(res));
}

// Johnson potentials of the graph whose edge weights are the slopes (negated
// when heading to -inf).
inline std::vector<Rational> slope_potentials(const ParametricGraph& g, Direction dir) {
  auto slopes = instantiate_with<Rational>(g, [dir](EdgeId, const ParametricEdge& e) {
    return dir == Direction::PlusInfinity ? e.weight.slope() : Rational(-e.weight.slope());
  });
  auto res = bellman_ford_virtual_source(slopes);
  if (std::holds_alternative<NegativeCycle>(res)) throw SlopeGraphNegativeCycle();
  return std::get<std::vector<Rational>>(std::move(res));
}

}  // namespace detail

/// Line through (alpha, h^alpha(v)) and (beta, h^beta(v)) for each v. With
/// alpha == beta the potentials are the constants h^alpha.
inline VertexPotential potentials_finite(const ParametricGraph& g, const Rational& alpha, const Rational& beta) {
  if (g.degree_bound() > 1) throw std::invalid_argument("potentials: weights must be linear");
  if (beta < alpha) throw std::invalid_argument("potentials_finite: alpha > beta");
  VertexPotential out;
  out.lo = alpha;
  out.hi = beta;
  auto ha = detail::potentials_at(g, alpha);
  if (alpha == beta) {
    for (auto& h : ha) out.g.push_back({Rational(0), std::move(h)});
    return out;
  }
  auto hb = detail::potentials_at(g, beta);
  const Rational width = beta - alpha;
  out.g.reserve(ha.size());
  for (std::size_t v = 0; v < ha.size(); ++v) {
    Rational slope = (hb[v] - ha[v]) / width;
    out.g.push_back({slope, ha[v] - slope * alpha});
  }
  return out;
}

/// g_v(x) = h^alpha(v) + (x - alpha) h^inf(v) for [alpha, +inf), mirrored for
/// (-inf, alpha] with the slope graph negated.
inline VertexPotential potentials_half_infinite(const ParametricGraph& g, const Rational& alpha, Direction dir) {
  if (g.degree_bound() > 1) throw std::invalid_argument("potentials: weights must be linear");
  VertexPotential out;
  if (dir == Direction::PlusInfinity) {
    out.lo = alpha;
  } else {
    out.hi = alpha;
  }
  auto ha = detail::potentials_at(g, alpha);
  auto hs = detail::slope_potentials(g, dir);
  out.g.reserve(ha.size());
  for (std::size_t v = 0; v < ha.size(); ++v) {
    Rational slope = dir == Direction::PlusInfinity ? hs[v] : Rational(-hs[v]);
    out.g.push_back({slope, ha[v] - slope * alpha});
  }
  return out;
}

/// For the whole line: one family on (-inf, 0] and one on [0, +inf).
inline std::pair<VertexPotential, VertexPotential> potentials_doubly_infinite(const ParametricGraph& g) {
  return {potentials_half_infinite(g, Rational(0), Direction::MinusInfinity),
          potentials_half_infinite(g, Rational(0), Direction::PlusInfinity)};
}

/// Potential families covering the interval, by case: finite, half-infinite,
/// or split at 0 when both ends are infinite.
inline std::vector<VertexPotential> potentials_for(const ParametricGraph& g, const FeasibleInterval& iv) {
  if (iv.alpha.is_finite() && iv.beta.is_finite()) return {potentials_finite(g, iv.alpha.value(), iv.beta.value())};
  if (iv.alpha.is_finite()) return {potentials_half_infinite(g, iv.alpha.value(), Direction::PlusInfinity)};
  if (iv.beta.is_finite()) return {potentials_half_infinite(g, iv.beta.value(), Direction::MinusInfinity)};
  auto [neg, pos] = potentials_doubly_infinite(g);
  return {std::move(neg), std::move(pos)};
}

}  // namespace psp
