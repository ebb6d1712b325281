#pragma once

// Two-phase single-source shortest paths for linear weights. Preprocessing
// computes the feasible interval and vertex potentials; each instantiation is
// one Dijkstra run on the reweighted graph. No Bellman-Ford at query time.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "psp/reweight.hpp"

namespace psp {

struct LinearAdvice {
  std::size_t vertex_count = 0;
  FeasibleInterval interval;
  /// One family, or two (on (-inf,0] then [0,+inf)) when the interval is the whole line.
  std::vector<VertexPotential> families;
  std::uint64_t provenance = 0;

  friend bool operator==(const LinearAdvice&, const LinearAdvice&) = default;
};

/// Result marker for an instantiation outside [alpha, beta].
struct MinusInfinity {
  friend bool operator==(MinusInfinity, MinusInfinity) { return true; }
};

class AdviceMismatch : public std::runtime_error {
 public:
  AdviceMismatch() : std::runtime_error("advice was not produced from this graph") {}
};

inline LinearAdvice preprocess_linear(const ParametricGraph& g) {
  if (g.degree_bound() > 1) throw std::invalid_argument("preprocess_linear: weights must be linear");
  LinearAdvice out;
  out.vertex_count = g.vertex_count();
  out.interval = compute_interval(g);
  out.families = potentials_for(g, out.interval);
  out.provenance = g.fingerprint();
  return out;
}

/// The family used at r; at r == 0 on the whole line the [0,+inf) family wins.
inline const VertexPotential& family_for(const LinearAdvice& advice, const Rational& r) {
  if (advice.families.size() == 2) return r >= 0 ? advice.families[1] : advice.families[0];
  return advice.families.front();
}

/// Advice bound to its graph, with every reweighted edge function
/// W(u,v)(x) + g_u(x) - g_v(x) precomputed per family and scaled to a common
/// denominator D. At x = p/q the scaled weight a*p + b*q is an integer, so
/// each instantiation is integer Dijkstra (int64 when it cannot overflow).
class LinearInstantiator {
 public:
  LinearInstantiator(const LinearAdvice& advice, const ParametricGraph& g) : advice_(&advice), g_(&g) {
    if (advice.provenance != g.fingerprint() || advice.vertex_count != g.vertex_count()) throw AdviceMismatch();
    if (g.degree_bound() > 1) throw std::invalid_argument("LinearInstantiator: weights must be linear");
    for (const auto& pot : advice.families) {
      Scaled fam;
      std::vector<Rational> slope(g.edge_count()), intercept(g.edge_count());
      fam.denominator = 1;
      for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const auto& e = g.edge(id);
        slope[id] = e.weight.slope() + pot.g[e.src].slope - pot.g[e.dst].slope;
        intercept[id] = e.weight.intercept() + pot.g[e.src].intercept - pot.g[e.dst].intercept;
        mpz_lcm(fam.denominator.get_mpz_t(), fam.denominator.get_mpz_t(), slope[id].get_den_mpz_t());
        mpz_lcm(fam.denominator.get_mpz_t(), fam.denominator.get_mpz_t(), intercept[id].get_den_mpz_t());
      }
      fam.a.resize(g.edge_count());
      fam.b.resize(g.edge_count());
      fam.bits = 0;
      for (EdgeId id = 0; id < g.edge_count(); ++id) {
        fam.a[id] = slope[id].get_num() * (fam.denominator / slope[id].get_den());
        fam.b[id] = intercept[id].get_num() * (fam.denominator / intercept[id].get_den());
        fam.bits = std::max({fam.bits, mpz_sizeinbase(fam.a[id].get_mpz_t(), 2), mpz_sizeinbase(fam.b[id].get_mpz_t(), 2)});
      }
      if (fam.bits < 63) {
        for (EdgeId id = 0; id < g.edge_count(); ++id) {
          fam.a64.push_back(fam.a[id].get_si());
          fam.b64.push_back(fam.b[id].get_si());
        }
      }
      scaled_.push_back(std::move(fam));
    }
  }

  std::variant<ShortestPathResult<Rational>, MinusInfinity> operator()(Vertex source, const Rational& r) const {
    const auto& advice = *advice_;
    const auto& g = *g_;
    if (source >= g.vertex_count()) throw std::out_of_range("instantiate_sssp: source out of range");
    if (!advice.interval.contains(r)) return MinusInfinity{};
    const std::size_t k = advice.families.size() == 2 && r >= 0 ? 1 : 0;
    const VertexPotential& pot = advice.families[k];
    const Scaled& fam = scaled_[k];
    const Integer& p = r.get_num();
    const Integer& q = r.get_den();
    const Integer scale = fam.denominator * q;

    // Every path weight stays below n * 2^(bits + max(bits p, bits q) + 1).
    std::size_t pq_bits = std::max(mpz_sizeinbase(p.get_mpz_t(), 2), mpz_sizeinbase(q.get_mpz_t(), 2));
    std::size_t n_bits = mpz_sizeinbase(Integer(static_cast<unsigned long>(g.vertex_count() + 1)).get_mpz_t(), 2);
    ShortestPathResult<Rational> out;
    if (!fam.a64.empty() && fam.bits + pq_bits + 1 + n_bits < 63) {
      const std::int64_t p64 = p.get_si(), q64 = q.get_si();
      auto gi = instantiate_with<std::int64_t>(
          g, [&](EdgeId id, const ParametricEdge&) { return fam.a64[id] * p64 + fam.b64[id] * q64; });
      out = unscale(dijkstra(gi, source), [](std::int64_t v) { return Integer(static_cast<long>(v)); }, scale);
    } else {
      auto gi = instantiate_with<Integer>(
          g, [&](EdgeId id, const ParametricEdge&) { return Integer(fam.a[id] * p + fam.b[id] * q); });
      out = unscale(dijkstra(gi, source), [](const Integer& v) { return v; }, scale);
    }
    const Rational shift_source = pot.g[source].at(r);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (out.dist[v].is_finite()) out.dist[v] = Extended<Rational>(out.dist[v].value() - shift_source + pot.g[v].at(r));
    }
    return out;
  }

 private:
  struct Scaled {
    Integer denominator;
    std::vector<Integer> a, b;
    std::vector<std::int64_t> a64, b64;
    std::size_t bits = 0;
  };

  template <class T, class ToInteger>
  static ShortestPathResult<Rational> unscale(ShortestPathResult<T>&& sp, ToInteger&& to_integer, const Integer& scale) {
    ShortestPathResult<Rational> out;
    out.source = sp.source;
    out.parent = std::move(sp.parent);
    out.order = std::move(sp.order);
    out.dist.reserve(sp.dist.size());
    for (const auto& d : sp.dist) {
      if (!d.is_finite()) {
        out.dist.push_back(Extended<Rational>::plus_infinity());
        continue;
      }
      Rational x(to_integer(d.value()), scale);
      x.canonicalize();
      out.dist.push_back(Extended<Rational>(std::move(x)));
    }
    return out;
  }

  const LinearAdvice* advice_;
  const ParametricGraph* g_;
  std::vector<Scaled> scaled_;
};

/// One-shot instantiation; build a LinearInstantiator to amortise the
/// per-edge preparation over many queries.
inline std::variant<ShortestPathResult<Rational>, MinusInfinity> instantiate_sssp(const LinearAdvice& advice,
                                                                                  const ParametricGraph& g,
                                                                                  Vertex source, const Rational& r) {
  return LinearInstantiator(advice, g)(source, r);
}

}  // namespace psp
