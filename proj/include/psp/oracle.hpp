#pragma once

// Brute-force references: exhaustive simple-cycle and simple-path enumeration.
// Exponential by nature; guarded by a vertex-count bound. These are the
// independent ground truth the fast pipelines are checked against.

#include <optional>
#include <stdexcept>
#include <vector>

#include "psp/graph.hpp"
#include "psp/shortest_path.hpp"

namespace psp::oracle {

inline constexpr std::size_t kDefaultBound = 10;

class BoundExceeded : public std::length_error {
 public:
  BoundExceeded(std::size_t n, std::size_t bound)
      : std::length_error("oracle: graph has " + std::to_string(n) + " vertices, bound is " + std::to_string(bound)) {}
};

struct WeightedWalk {
  std::vector<EdgeId> edges;
  PolyWeight weight;
};

/// Every simple directed cycle once, rotated so its smallest vertex comes first.
/// Parallel edges yield distinct cycles.
inline std::vector<WeightedWalk> enumerate_simple_cycles(const ParametricGraph& g,
                                                         std::size_t bound = kDefaultBound) {
  const std::size_t n = g.vertex_count();
  if (n > bound) throw BoundExceeded(n, bound);
  std::vector<std::vector<EdgeId>> out_edges(n);
  for (EdgeId i = 0; i < g.edge_count(); ++i) out_edges[g.edge(i).src].push_back(i);

  std::vector<WeightedWalk> cycles;
  std::vector<char> on_path(n, 0);
  std::vector<EdgeId> path;
  // Cycles rooted at `start` only visit vertices > start.
  auto dfs = [&](auto&& self, Vertex start, Vertex x) -> void {
    for (EdgeId id : out_edges[x]) {
      Vertex y = g.edge(id).dst;
      if (y == start) {
        path.push_back(id);
        cycles.push_back({path, path_weight(g, path)});
        path.pop_back();
      } else if (y > start && !on_path[y]) {
        on_path[y] = 1;
        path.push_back(id);
        self(self, start, y);
        path.pop_back();
        on_path[y] = 0;
      }
    }
  };
  for (Vertex s = 0; s < n; ++s) {
    on_path[s] = 1;
    dfs(dfs, s, s);
    on_path[s] = 0;
  }
  return cycles;
}

struct BruteInterval {
  ExtendedValue alpha = ExtendedValue::minus_infinity();
  ExtendedValue beta = ExtendedValue::plus_infinity();
  std::optional<std::vector<EdgeId>> alpha_witness;
  std::optional<std::vector<EdgeId>> beta_witness;
};

/// The feasible interval straight from its definition: alpha is the largest
/// root over cycles with positive slope, beta the smallest over negative
/// slopes. nullopt when no r is feasible.
inline std::optional<BruteInterval> brute_interval(const ParametricGraph& g, std::size_t bound = kDefaultBound) {
  if (g.degree_bound() > 1) throw std::invalid_argument("brute_interval: weights must be linear");
  BruteInterval out;
  for (auto& c : enumerate_simple_cycles(g, bound)) {
    const Rational a = c.weight.slope();
    const Rational b = c.weight.intercept();
    if (a == 0) {
      if (b < 0) return std::nullopt;
      continue;
    }
    Rational root = -b / a;
    if (a > 0 && ExtendedValue(root) > out.alpha) {
      out.alpha = root;
      out.alpha_witness = c.edges;
    } else if (a < 0 && ExtendedValue(root) < out.beta) {
      out.beta = root;
      out.beta_witness = c.edges;
    }
  }
  if (out.alpha > out.beta) return std::nullopt;
  return out;
}

/// Caches the enumerations so many (u, v, r) queries on one graph stay cheap.
class BruteForce {
 public:
  explicit BruteForce(const ParametricGraph& g, std::size_t bound = kDefaultBound)
      : n_(g.vertex_count()), reach_(reachability(g)) {
    if (n_ > bound) throw BoundExceeded(n_, bound);
    cycles_ = enumerate_simple_cycles(g, bound);
    cycle_vertices_.resize(cycles_.size());
    for (std::size_t c = 0; c < cycles_.size(); ++c) {
      for (EdgeId id : cycles_[c].edges) cycle_vertices_[c].push_back(g.edge(id).src);
    }
    paths_.resize(n_ * n_);
    std::vector<std::vector<EdgeId>> out_edges(n_);
    for (EdgeId i = 0; i < g.edge_count(); ++i) out_edges[g.edge(i).src].push_back(i);
    std::vector<char> on_path(n_, 0);
    std::vector<EdgeId> path;
    auto dfs = [&](auto&& self, Vertex start, Vertex x) -> void {
      paths_[start * n_ + x].push_back({path, path_weight(g, path)});
      for (EdgeId id : out_edges[x]) {
        Vertex y = g.edge(id).dst;
        if (on_path[y]) continue;
        on_path[y] = 1;
        path.push_back(id);
        self(self, start, y);
        path.pop_back();
        on_path[y] = 0;
      }
    };
    for (Vertex s = 0; s < n_; ++s) {
      on_path[s] = 1;
      dfs(dfs, s, s);
      on_path[s] = 0;
    }
  }

  /// All simple u->v paths (including the empty path when u == v).
  const std::vector<WeightedWalk>& simple_paths(Vertex u, Vertex v) const { return paths_.at(u * n_ + v); }

  const std::vector<WeightedWalk>& cycles() const { return cycles_; }

  /// True iff some simple cycle through w has negative weight at r.
  bool on_negative_cycle(Vertex w, const Rational& r) const {
    for (std::size_t c = 0; c < cycles_.size(); ++c) {
      bool touches = false;
      for (Vertex x : cycle_vertices_[c]) touches = touches || x == w;
      if (touches && evaluate(cycles_[c].weight, r) < 0) return true;
    }
    return false;
  }

  /// delta(u, v) in G(r): -inf if a negative cycle sits on some u->v walk,
  /// else the minimum over simple paths, +inf if there is none.
  ExtendedValue distance(Vertex u, Vertex v, const Rational& r) const {
    if (!reach_[u * n_ + v]) return ExtendedValue::plus_infinity();
    for (Vertex w = 0; w < n_; ++w) {
      if (reach_[u * n_ + w] && reach_[w * n_ + v] && on_negative_cycle(w, r)) return ExtendedValue::minus_infinity();
    }
    ExtendedValue best = ExtendedValue::plus_infinity();
    for (const auto& p : simple_paths(u, v)) {
      ExtendedValue val(evaluate(p.weight, r));
      if (val < best) best = val;
    }
    return best;
  }

 private:
  std::size_t n_;
  std::vector<char> reach_;
  std::vector<WeightedWalk> cycles_;
  std::vector<std::vector<Vertex>> cycle_vertices_;
  std::vector<std::vector<WeightedWalk>> paths_;
};

inline ExtendedValue brute_distance(const ParametricGraph& g, Vertex u, Vertex v, const Rational& r,
                                    std::size_t bound = kDefaultBound) {
  return BruteForce(g, bound).distance(u, v, r);
}

/// Per-instantiation ground truth from one source: plain Bellman-Ford for n-1
/// rounds, then n more rounds in which anything still improvable, and
/// everything reachable from it, becomes -inf.
inline std::vector<ExtendedValue> bellman_ford_distances(const InstantiatedGraph<Rational>& g, Vertex source) {
  const std::size_t n = g.vertex_count();
  std::vector<ExtendedValue> dist(n, ExtendedValue::plus_infinity());
  dist.at(source) = Rational(0);
  for (std::size_t round = 0; round + 1 < n; ++round) {
    for (const auto& e : g.edges()) {
      if (!dist[e.src].is_finite()) continue;
      ExtendedValue cand(dist[e.src].value() + e.weight);
      if (cand < dist[e.dst]) dist[e.dst] = cand;
    }
  }
  for (std::size_t round = 0; round < n; ++round) {
    for (const auto& e : g.edges()) {
      if (dist[e.src].is_plus_infinity()) continue;
      if (dist[e.src].is_minus_infinity()) {
        dist[e.dst] = ExtendedValue::minus_infinity();
        continue;
      }
      ExtendedValue cand(dist[e.src].value() + e.weight);
      if (cand < dist[e.dst]) dist[e.dst] = ExtendedValue::minus_infinity();
    }
  }
  return dist;
}

}  // namespace psp::oracle
