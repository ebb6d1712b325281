#pragma once

// Bellman-Ford (with negative-cycle extraction), binary-heap Dijkstra, and
// hop-limited all-pairs shortest paths by min-plus repeated squaring.
// All engines are templated on the weight scalar: exact Rational or double.

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "psp/graph.hpp"

namespace psp {

namespace stats {
inline std::atomic<std::uint64_t> bellman_ford_calls{0};

/// Number of Bellman-Ford runs (either flavour) in this process so far.
inline std::uint64_t bellman_ford_call_count() { return bellman_ford_calls.load(); }
}  // namespace stats

template <class T>
struct ShortestPathResult {
  Vertex source = 0;
  std::vector<Extended<T>> dist;
  /// Parent edge id (the parametric edge id) of each reached vertex other than the source.
  std::vector<std::optional<EdgeId>> parent;
  /// Vertices in the order their distance became final (Dijkstra only).
  std::vector<Vertex> order;
};

/// Edge ids of a negative-weight cycle, in traversal order.
struct NegativeCycle {
  std::vector<EdgeId> edges;
};

class NegativeEdge : public std::invalid_argument {
 public:
  NegativeEdge() : std::invalid_argument("dijkstra: negative edge weight") {}
};

namespace detail {

template <class T>
const WeightedEdge<T>* edge_by_source_id(const InstantiatedGraph<T>& g, EdgeId id) {
  // instantiate() keeps positions equal to source ids; fall back to a scan otherwise.
  const auto& edges = g.edges();
  if (id < edges.size() && edges[id].source_id == id) return &edges[id];
  for (const auto& e : edges) {
    if (e.source_id == id) return &e;
  }
  return nullptr;
}

// Looks for a cycle in the parent-pointer graph. parent[v] is a position in g.edges().
template <class T>
std::optional<NegativeCycle> parent_graph_cycle(const InstantiatedGraph<T>& g, const std::vector<std::int64_t>& parent) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint8_t> state(n, 0);  // 0 unvisited, 1 on current walk, 2 done
  std::vector<Vertex> walk;
  for (Vertex s = 0; s < n; ++s) {
    if (state[s] != 0) continue;
    walk.clear();
    Vertex x = s;
    while (true) {
      if (state[x] == 2) break;
      if (state[x] == 1) {
        NegativeCycle cyc;
        Vertex y = x;
        do {
          const auto& e = g.edges()[static_cast<std::size_t>(parent[y])];
          cyc.edges.push_back(e.source_id);
          y = e.src;
        } while (y != x);
        std::reverse(cyc.edges.begin(), cyc.edges.end());
        return cyc;
      }
      state[x] = 1;
      walk.push_back(x);
      if (parent[x] < 0) break;
      x = g.edges()[static_cast<std::size_t>(parent[x])].src;
    }
    for (Vertex v : walk) state[v] = 2;
  }
  return std::nullopt;
}

template <class T>
T cycle_sum(const InstantiatedGraph<T>& g, const NegativeCycle& c) {
  T sum = 0;
  for (EdgeId id : c.edges) sum += edge_by_source_id(g, id)->weight;
  return sum;
}

// Round-robin relaxation over the edge list with early exit. `reached[v]` marks
// finite distances. Returns a negative cycle if relaxation is still active
// after n rounds.
template <class T>
std::optional<NegativeCycle> relax_rounds(const InstantiatedGraph<T>& g, std::vector<T>& dist,
                                          std::vector<char>& reached, std::vector<std::int64_t>& parent) {
  const std::size_t n = g.vertex_count();
  const auto& edges = g.edges();
  T cand;
  std::size_t round = 0;
  while (true) {
    ++round;
    bool changed = false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      if (!reached[e.src]) continue;
      cand = dist[e.src] + e.weight;
      if (!reached[e.dst] || cand < dist[e.dst]) {
        dist[e.dst] = cand;
        reached[e.dst] = 1;
        parent[e.dst] = static_cast<std::int64_t>(i);
        changed = true;
      }
    }
    if (!changed) return std::nullopt;
    if (round >= n) {
      // Any cycle of the parent graph is negative once it appears; keep
      // relaxing until one does.
      if (auto cyc = parent_graph_cycle(g, parent); cyc && cycle_sum(g, *cyc) < 0) return cyc;
      if (round > 8 * n + 8) throw std::logic_error("bellman_ford: parent graph never closed a cycle");
    }
  }
}

}  // namespace detail

/// Single-source Bellman-Ford. Returns distances, or one negative cycle
/// reachable from the source.
template <class T>
std::variant<ShortestPathResult<T>, NegativeCycle> bellman_ford(const InstantiatedGraph<T>& g, Vertex source) {
  const std::size_t n = g.vertex_count();
  if (source >= n) throw std::out_of_range("bellman_ford: source out of range");
  ++stats::bellman_ford_calls;
  std::vector<T> dist(n, T(0));
  std::vector<char> reached(n, 0);
  std::vector<std::int64_t> parent(n, -1);
  reached[source] = 1;
  if (auto cyc = detail::relax_rounds(g, dist, reached, parent)) return *cyc;
  ShortestPathResult<T> out;
  out.source = source;
  out.dist.resize(n);
  out.parent.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    if (reached[v]) out.dist[v] = Extended<T>(dist[v]);
    if (parent[v] >= 0) out.parent[v] = g.edges()[static_cast<std::size_t>(parent[v])].source_id;
  }
  return out;
}

/// Johnson-style potentials: Bellman-Ford from a virtual source joined to every
/// vertex by a zero-weight edge. On success h(v) <= 0 and w(u,v) + h(u) - h(v) >= 0.
template <class T>
std::variant<std::vector<T>, NegativeCycle> bellman_ford_virtual_source(const InstantiatedGraph<T>& g) {
  const std::size_t n = g.vertex_count();
  ++stats::bellman_ford_calls;
  std::vector<T> dist(n, T(0));
  std::vector<char> reached(n, 1);
  std::vector<std::int64_t> parent(n, -1);
  if (auto cyc = detail::relax_rounds(g, dist, reached, parent)) return *cyc;
  return dist;
}

/// Dijkstra with a binary heap and lazy deletion. Requires nonnegative weights.
template <class T>
ShortestPathResult<T> dijkstra(const InstantiatedGraph<T>& g, Vertex source) {
  const std::size_t n = g.vertex_count();
  if (source >= n) throw std::out_of_range("dijkstra: source out of range");
  for (const auto& e : g.edges()) {
    if (e.weight < 0) throw NegativeEdge();
  }
  std::vector<T> dist(n, T(0));
  std::vector<char> reached(n, 0), done(n, 0);
  std::vector<std::int64_t> parent(n, -1);
  using Item = std::pair<T, Vertex>;
  auto cmp = [](const Item& a, const Item& b) { return b.first < a.first; };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);

  ShortestPathResult<T> out;
  out.source = source;
  out.order.reserve(n);
  reached[source] = 1;
  heap.emplace(T(0), source);
  T cand;
  while (!heap.empty()) {
    Vertex x = heap.top().second;
    heap.pop();
    if (done[x]) continue;
    done[x] = 1;
    out.order.push_back(x);
    for (std::uint32_t pos : g.out_edges(x)) {
      const auto& e = g.edges()[pos];
      if (done[e.dst]) continue;
      cand = dist[x] + e.weight;
      if (!reached[e.dst] || cand < dist[e.dst]) {
        reached[e.dst] = 1;
        dist[e.dst] = cand;
        parent[e.dst] = pos;
        heap.emplace(cand, e.dst);
      }
    }
  }
  out.dist.resize(n);
  out.parent.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    if (reached[v]) out.dist[v] = Extended<T>(dist[v]);
    if (parent[v] >= 0) out.parent[v] = g.edges()[static_cast<std::size_t>(parent[v])].source_id;
  }
  return out;
}

/// Walks parent pointers back from v; empty when v is the source or unreached.
template <class T>
std::vector<EdgeId> tree_path(const ParametricGraph& g, const ShortestPathResult<T>& sp, Vertex v) {
  std::vector<EdgeId> path;
  while (v != sp.source && sp.parent[v]) {
    EdgeId id = *sp.parent[v];
    path.push_back(id);
    v = g.edge(id).src;
    if (path.size() > g.vertex_count()) throw std::logic_error("tree_path: parent pointers contain a cycle");
  }
  std::reverse(path.begin(), path.end());
  return path;
}

/// Shortest u->v distances over paths with at most `max_vertices` vertices
/// (so at most max_vertices - 1 edges), by binary powering of the one-edge
/// min-plus matrix. Paths are recovered from per-product midpoint tables.
template <class T>
class HopLimitedApsp {
 public:
  HopLimitedApsp(const InstantiatedGraph<T>& g, std::size_t max_vertices) : n_(g.vertex_count()) {
    if (max_vertices < 1) throw std::invalid_argument("hop_limited_apsp: max_vertices must be >= 1");
    const std::size_t nn = n_ * n_;

    // Factor 0: at most one edge. Diagonal starts at the empty path.
    Node base;
    base.value.assign(nn, T(0));
    base.finite.assign(nn, 0);
    base.choice.assign(nn, -1);
    for (Vertex v = 0; v < n_; ++v) base.finite[v * n_ + v] = 1;
    for (const auto& e : g.edges()) {
      std::size_t k = static_cast<std::size_t>(e.src) * n_ + e.dst;
      if (!base.finite[k] || e.weight < base.value[k]) {
        base.value[k] = e.weight;
        base.finite[k] = 1;
        base.choice[k] = e.source_id;
      }
    }

    std::size_t edges_allowed = max_vertices - 1;
    if (edges_allowed == 0) {
      Node id;
      id.value.assign(nn, T(0));
      id.finite.assign(nn, 0);
      id.choice.assign(nn, -1);
      for (Vertex v = 0; v < n_; ++v) id.finite[v * n_ + v] = 1;
      nodes_.push_back(std::move(id));
      result_ = 0;
      return;
    }
    nodes_.push_back(std::move(base));
    std::int64_t power = 0;  // node holding paths of <= 2^j edges
    std::int64_t acc = -1;
    while (true) {
      if (edges_allowed & 1U) acc = acc < 0 ? power : multiply(acc, power);
      edges_allowed >>= 1U;
      if (edges_allowed == 0) break;
      power = multiply(power, power);
    }
    result_ = acc;
  }

  std::size_t vertex_count() const { return n_; }

  Extended<T> distance(Vertex u, Vertex v) const {
    const Node& r = nodes_[static_cast<std::size_t>(result_)];
    std::size_t k = static_cast<std::size_t>(u) * n_ + v;
    return r.finite[k] ? Extended<T>(r.value[k]) : Extended<T>::plus_infinity();
  }

  /// Edge ids of a path realizing distance(u, v); empty for u == v with the empty path.
  std::vector<EdgeId> path(Vertex u, Vertex v) const {
    std::vector<EdgeId> out;
    if (!distance(u, v).is_finite()) return out;
    collect(result_, u, v, out);
    return out;
  }

  /// Number of min-plus products performed.
  std::size_t product_count() const { return nodes_.size() - 1; }

 private:
  struct Node {
    std::vector<T> value;
    std::vector<char> finite;
    std::vector<std::int64_t> choice;  // leaf: edge id or -1; product: midpoint vertex
    std::int64_t left = -1;
    std::int64_t right = -1;
  };

  std::int64_t multiply(std::int64_t a, std::int64_t b) {
    const std::size_t nn = n_ * n_;
    Node out;
    out.value.assign(nn, T(0));
    out.finite.assign(nn, 0);
    out.choice.assign(nn, -1);
    out.left = a;
    out.right = b;
    const Node& A = nodes_[static_cast<std::size_t>(a)];
    const Node& B = nodes_[static_cast<std::size_t>(b)];
    T cand;
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t w = 0; w < n_; ++w) {
        const std::size_t uw = u * n_ + w;
        if (!A.finite[uw]) continue;
        const T& a_uw = A.value[uw];
        const std::size_t row = w * n_;
        for (std::size_t v = 0; v < n_; ++v) {
          if (!B.finite[row + v]) continue;
          cand = a_uw + B.value[row + v];
          const std::size_t uv = u * n_ + v;
          if (!out.finite[uv] || cand < out.value[uv]) {
            out.value[uv] = cand;
            out.finite[uv] = 1;
            out.choice[uv] = static_cast<std::int64_t>(w);
          }
        }
      }
    }
    nodes_.push_back(std::move(out));
    return static_cast<std::int64_t>(nodes_.size() - 1);
  }

  void collect(std::int64_t node, Vertex u, Vertex v, std::vector<EdgeId>& out) const {
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    std::int64_t c = nd.choice[static_cast<std::size_t>(u) * n_ + v];
    if (nd.left < 0) {
      if (c >= 0) out.push_back(static_cast<EdgeId>(c));
      return;
    }
    auto w = static_cast<Vertex>(c);
    collect(nd.left, u, w, out);
    collect(nd.right, w, v, out);
  }

  std::size_t n_;
  std::vector<Node> nodes_;
  std::int64_t result_ = 0;
};

template <class T>
HopLimitedApsp<T> hop_limited_apsp(const InstantiatedGraph<T>& g, std::size_t max_vertices) {
  return HopLimitedApsp<T>(g, max_vertices);
}

}  // namespace psp
