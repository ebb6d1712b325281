#pragma once

// Randomized epsilon-surplus all-pairs scheme for linear weights on a fixed
// [alpha, beta]. Two grids of instantiations are solved ahead of time:
//   crude:   hop-limited APSP at N0 + 1 points (short paths),
//   refined: shortest-path trees into and out of sampled hubs at N1 + 1 points
//            (long paths, which pass through a hub with high probability).
// A query reads four table entries and evaluates exact path functions at r, so
// the answer is always the true length of a real path (z >= delta).

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "psp/random_graph.hpp"
#include "psp/reweight.hpp"

namespace psp {

struct SurplusParams {
  Rational epsilon = 1;
  Rational alpha = 0;
  Rational beta = 1;
  /// Optional bound every edge slope must respect.
  std::optional<Rational> gamma;
  std::uint64_t seed = 0;
  std::optional<std::size_t> n0;
  std::optional<std::size_t> n1;
  std::optional<std::size_t> hop_limit;
  std::optional<std::size_t> hubs;
  /// Cap on N0 * n^2 and N1 * |H| * n when no override is given.
  std::size_t entry_budget = 200'000'000;

  bool has_overrides() const { return n0 || n1 || hop_limit || hubs; }

  friend bool operator==(const SurplusParams&, const SurplusParams&) = default;
};

struct SurplusConstants {
  Rational K;
  std::size_t n0 = 1;
  std::size_t n1 = 1;
  Rational rho0;
  Rational rho1;
  /// Paths in the crude part have at most this many vertices.
  std::size_t hop_limit = 1;
  /// Number of hub draws (with replacement).
  std::size_t hub_draws = 1;

  friend bool operator==(const SurplusConstants&, const SurplusConstants&) = default;
};

struct CrudeEntry {
  bool defined = false;
  LinearFn f;
  std::vector<EdgeId> path;

  friend bool operator==(const CrudeEntry&, const CrudeEntry&) = default;
};

struct TreeEntry {
  bool reached = false;
  /// Tree edge towards the hub; -1 at the hub itself.
  std::int64_t parent = -1;
  LinearFn f;

  friend bool operator==(const TreeEntry&, const TreeEntry&) = default;
};

class NegativeCycleInInterval : public std::runtime_error {
 public:
  explicit NegativeCycleInInterval(const Rational& at)
      : std::runtime_error("negative cycle at " + format_rational(at) + ", inside the requested interval") {}
};

class GridTooLarge : public std::runtime_error {
 public:
  explicit GridTooLarge(std::size_t entries)
      : std::runtime_error("surplus grids need " + std::to_string(entries) + " entries, over the budget") {}
};

class OutOfInterval : public std::out_of_range {
 public:
  explicit OutOfInterval(const Rational& r) : std::out_of_range("r = " + format_rational(r) + " outside [alpha, beta]") {}
};

struct SurplusAdvice {
  std::size_t vertex_count = 0;
  SurplusParams params;
  SurplusConstants constants;
  /// Distinct hub vertices, increasing.
  std::vector<Vertex> hubs;
  /// crude[i * n * n + u * n + v]
  std::vector<CrudeEntry> crude;
  /// out_trees[(j * |H| + h) * n + v] holds f*_j(hub h, v); in_trees holds f*_j(v, hub h).
  std::vector<TreeEntry> out_trees;
  std::vector<TreeEntry> in_trees;
  /// minimizer[j * n * n + u * n + v]: hub index or -1.
  std::vector<std::int32_t> minimizer;
  std::uint64_t provenance = 0;

  std::size_t n() const { return vertex_count; }

  const CrudeEntry& crude_at(std::size_t i, Vertex u, Vertex v) const { return crude[(i * n() + u) * n() + v]; }
  const TreeEntry& out_at(std::size_t j, std::size_t h, Vertex v) const {
    return out_trees[(j * hubs.size() + h) * n() + v];
  }
  const TreeEntry& in_at(std::size_t j, std::size_t h, Vertex v) const {
    return in_trees[(j * hubs.size() + h) * n() + v];
  }
  std::int32_t minimizer_at(std::size_t j, Vertex u, Vertex v) const { return minimizer[(j * n() + u) * n() + v]; }

  friend bool operator==(const SurplusAdvice&, const SurplusAdvice&) = default;
};

inline std::size_t ceil_sqrt(std::size_t n) {
  auto k = static_cast<std::size_t>(std::sqrt(static_cast<long double>(n)));
  while (k * k < n) ++k;
  while (k > 0 && (k - 1) * (k - 1) >= n) --k;
  return k;
}

/// K = 8 (beta - alpha) max|slope|, N0 = ceil(K sqrt(n) ln n / eps),
/// N1 = ceil(K n / eps), hop limit = ceil(4 sqrt(n) ln n), ceil(sqrt n) hub
/// draws; each at least 1, overrides applied last.
inline SurplusConstants surplus_constants(const ParametricGraph& g, const SurplusParams& p) {
  SurplusConstants c;
  Rational max_slope = 0;
  for (const auto& e : g.edges()) max_slope = std::max(max_slope, abs_value(e.weight.slope()));
  c.K = 8 * (p.beta - p.alpha) * max_slope;
  const long double n = static_cast<long double>(g.vertex_count());
  const long double root_log = n > 0 ? std::sqrt(n) * std::log(n) : 0.0L;
  auto at_least_one = [](long double x) { return x < 1 ? std::size_t{1} : static_cast<std::size_t>(std::ceil(x)); };
  c.n0 = at_least_one(static_cast<long double>(c.K.get_d()) * root_log / static_cast<long double>(p.epsilon.get_d()));
  Integer n1 = ceil_of(c.K * Rational(static_cast<long>(g.vertex_count())) / p.epsilon);
  c.n1 = n1 < 1 ? 1 : static_cast<std::size_t>(n1.get_ui());
  c.hop_limit = at_least_one(4 * root_log);
  c.hub_draws = std::max<std::size_t>(1, ceil_sqrt(g.vertex_count()));
  if (p.n0) c.n0 = std::max<std::size_t>(1, *p.n0);
  if (p.n1) c.n1 = std::max<std::size_t>(1, *p.n1);
  if (p.hop_limit) c.hop_limit = std::max<std::size_t>(1, *p.hop_limit);
  if (p.hubs) c.hub_draws = std::max<std::size_t>(1, *p.hubs);
  c.rho0 = (p.beta - p.alpha) / Rational(static_cast<long>(c.n0));
  c.rho1 = (p.beta - p.alpha) / Rational(static_cast<long>(c.n1));
  return c;
}

/// Index of the grid point alpha + k * rho closest to r; ties go to the lower index.
inline std::size_t nearest_grid_index(const Rational& r, const Rational& alpha, const Rational& rho, std::size_t last) {
  Rational t = (r - alpha) / rho;
  Integer k = ceil_of(t - Rational(1, 2));
  if (k < 0) return 0;
  if (k > static_cast<unsigned long>(last)) return last;
  return static_cast<std::size_t>(k.get_ui());
}

/// ceil(sqrt n) (or the override) uniform draws from [0, n) with replacement,
/// deduplicated and sorted.
inline std::vector<Vertex> sample_hubs(std::size_t n, std::size_t draws, std::uint64_t seed) {
  std::vector<Vertex> hubs;
  if (n == 0) return hubs;
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < draws; ++k) hubs.push_back(static_cast<Vertex>(rng.below(n)));
  std::sort(hubs.begin(), hubs.end());
  hubs.erase(std::unique(hubs.begin(), hubs.end()), hubs.end());
  return hubs;
}

namespace detail {

inline LinearFn as_linear(const PolyWeight& p) { return {p.slope(), p.intercept()}; }

inline LinearFn plus(const LinearFn& a, const PolyWeight& w) { return {a.slope + w.slope(), a.intercept + w.intercept()}; }

// Shortest-path tree from `root` at r on the reweighted graph (reversed when
// inward), with exact path functions accumulated in settle order.
inline void hub_tree(const ParametricGraph& g, const InstantiatedGraph<double>& reweighted, Vertex root, bool inward,
                     TreeEntry* out) {
  auto sp = dijkstra(reweighted, root);
  for (Vertex v : sp.order) {
    TreeEntry& t = out[v];
    t.reached = true;
    if (v == root) {
      t.parent = -1;
      t.f = {0, 0};
      continue;
    }
    EdgeId id = *sp.parent[v];
    const auto& e = g.edge(id);
    Vertex prev = inward ? e.dst : e.src;
    t.parent = id;
    t.f = plus(out[prev].f, e.weight);
  }
}

}  // namespace detail

inline SurplusAdvice preprocess_surplus(const ParametricGraph& g, const SurplusParams& params) {
  if (g.degree_bound() > 1) throw std::invalid_argument("preprocess_surplus: weights must be linear");
  if (!(params.alpha < params.beta)) throw std::invalid_argument("preprocess_surplus: need alpha < beta");
  if (!(params.epsilon > 0)) throw std::invalid_argument("preprocess_surplus: epsilon must be positive");
  if (params.gamma) {
    for (const auto& e : g.edges()) {
      if (abs_value(e.weight.slope()) > *params.gamma) throw std::invalid_argument("edge slope exceeds gamma");
    }
  }
  for (const Rational& end : {params.alpha, params.beta}) {
    if (std::holds_alternative<NegativeCycle>(bellman_ford_virtual_source(instantiate(g, end)))) {
      throw NegativeCycleInInterval(end);
    }
  }

  const std::size_t n = g.vertex_count();
  SurplusAdvice a;
  a.vertex_count = n;
  a.params = params;
  a.constants = surplus_constants(g, params);
  a.provenance = g.fingerprint();
  const auto& c = a.constants;

  if (!params.has_overrides()) {
    std::size_t crude_entries = c.n0 * n * n;
    std::size_t refined_entries = c.n1 * c.hub_draws * n;
    if (std::max(crude_entries, refined_entries) > params.entry_budget) {
      throw GridTooLarge(std::max(crude_entries, refined_entries));
    }
  }

  // Crude part: hop-limited APSP in doubles, path functions kept exact.
  const std::size_t apsp_vertices = std::min(c.hop_limit, std::max<std::size_t>(n, 1));
  a.crude.resize((c.n0 + 1) * n * n);
  for (std::size_t i = 0; i <= c.n0; ++i) {
    Rational r = params.alpha + Rational(static_cast<long>(i)) * c.rho0;
    const double rd = r.get_d();
    auto gi = instantiate_with<double>(g, [&](EdgeId, const ParametricEdge& e) { return evaluate_double(e.weight, rd); });
    HopLimitedApsp<double> apsp(gi, apsp_vertices);
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) {
        if (!apsp.distance(u, v).is_finite()) continue;
        CrudeEntry& entry = a.crude[(i * n + u) * n + v];
        entry.defined = true;
        entry.path = apsp.path(u, v);
        entry.f = detail::as_linear(path_weight(g, entry.path));
      }
    }
  }

  // Refined part: hub trees on graphs made nonnegative by the potentials.
  a.hubs = sample_hubs(n, c.hub_draws, params.seed);
  const std::size_t H = a.hubs.size();
  const VertexPotential pot = potentials_finite(g, params.alpha, params.beta);
  a.out_trees.resize((c.n1 + 1) * H * n);
  a.in_trees.resize((c.n1 + 1) * H * n);
  a.minimizer.assign((c.n1 + 1) * n * n, -1);
  std::vector<double> to_hub(H * n), from_hub(H * n);
  for (std::size_t j = 0; j <= c.n1; ++j) {
    Rational r = params.alpha + Rational(static_cast<long>(j)) * c.rho1;
    auto reweighted = instantiate_with<double>(g, [&](EdgeId, const ParametricEdge& e) {
      Rational w = evaluate(e.weight, r) + pot.g[e.src].at(r) - pot.g[e.dst].at(r);
      return w.get_d();
    });
    auto reversed = reweighted.reversed();
    for (std::size_t h = 0; h < H; ++h) {
      detail::hub_tree(g, reweighted, a.hubs[h], false, &a.out_trees[(j * H + h) * n]);
      detail::hub_tree(g, reversed, a.hubs[h], true, &a.in_trees[(j * H + h) * n]);
      for (Vertex v = 0; v < n; ++v) {
        const auto& o = a.out_at(j, h, v);
        const auto& in = a.in_at(j, h, v);
        from_hub[h * n + v] = o.reached ? o.f.at(r).get_d() : HUGE_VAL;
        to_hub[h * n + v] = in.reached ? in.f.at(r).get_d() : HUGE_VAL;
      }
    }
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) {
        std::int32_t best = -1;
        double best_len = HUGE_VAL;
        for (std::size_t h = 0; h < H; ++h) {
          double len = to_hub[h * n + u] + from_hub[h * n + v];
          if (len < best_len) {
            best_len = len;
            best = static_cast<std::int32_t>(h);
          }
        }
        a.minimizer[(j * n + u) * n + v] = best;
      }
    }
  }
  return a;
}

struct SurplusPathRef {
  enum class Kind : std::uint8_t { None, Crude, Hub };
  Kind kind = Kind::None;
  /// Grid index (crude i or refined j).
  std::size_t grid = 0;
  /// Index into SurplusAdvice::hubs.
  std::size_t hub = 0;
};

struct SurplusAnswer {
  ExtendedValue value = ExtendedValue::plus_infinity();
  SurplusPathRef path;
  /// Table entries read.
  std::size_t touches = 0;
};

/// z = min(w0, w1): w0 from the crude entry at the nearest crude grid point,
/// w1 through the stored best hub at the nearest refined grid point. Both are
/// exact evaluations of real path functions at r.
inline SurplusAnswer query_surplus(const SurplusAdvice& a, Vertex u, Vertex v, const Rational& r) {
  if (u >= a.n() || v >= a.n()) throw std::out_of_range("query_surplus: vertex out of range");
  if (r < a.params.alpha || r > a.params.beta) throw OutOfInterval(r);
  const auto& c = a.constants;
  SurplusAnswer out;
  std::size_t i = nearest_grid_index(r, a.params.alpha, c.rho0, c.n0);
  std::size_t j = nearest_grid_index(r, a.params.alpha, c.rho1, c.n1);

  const CrudeEntry& crude = a.crude_at(i, u, v);
  ++out.touches;
  if (crude.defined) {
    out.value = crude.f.at(r);
    out.path = {SurplusPathRef::Kind::Crude, i, 0};
  }
  std::int32_t h = a.minimizer_at(j, u, v);
  ++out.touches;
  if (h >= 0) {
    const auto hub = static_cast<std::size_t>(h);
    const TreeEntry& in = a.in_at(j, hub, u);
    const TreeEntry& o = a.out_at(j, hub, v);
    out.touches += 2;
    if (in.reached && o.reached) {
      ExtendedValue w1(in.f.at(r) + o.f.at(r));
      if (w1 < out.value) {
        out.value = w1;
        out.path = {SurplusPathRef::Kind::Hub, j, hub};
      }
    }
  }
  return out;
}

/// Edge ids of the path an answer refers to; linear in its length.
inline std::vector<EdgeId> surplus_path(const SurplusAdvice& a, const ParametricGraph& g, Vertex u, Vertex v,
                                        const SurplusPathRef& ref) {
  std::vector<EdgeId> path;
  if (ref.kind == SurplusPathRef::Kind::Crude) return a.crude_at(ref.grid, u, v).path;
  if (ref.kind != SurplusPathRef::Kind::Hub) return path;
  Vertex x = u;
  for (const TreeEntry* t = &a.in_at(ref.grid, ref.hub, x); t->parent >= 0; t = &a.in_at(ref.grid, ref.hub, x)) {
    path.push_back(static_cast<EdgeId>(t->parent));
    x = g.edge(static_cast<EdgeId>(t->parent)).dst;
  }
  std::vector<EdgeId> tail;
  x = v;
  for (const TreeEntry* t = &a.out_at(ref.grid, ref.hub, x); t->parent >= 0; t = &a.out_at(ref.grid, ref.hub, x)) {
    tail.push_back(static_cast<EdgeId>(t->parent));
    x = g.edge(static_cast<EdgeId>(t->parent)).src;
  }
  path.insert(path.end(), tail.rbegin(), tail.rend());
  return path;
}

}  // namespace psp
