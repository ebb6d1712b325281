#pragma once

// Parametric digraphs, their instantiations, and the ".pwg" text format.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "psp/poly.hpp"

namespace psp {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct ParametricEdge {
  Vertex src = 0;
  Vertex dst = 0;
  PolyWeight weight;
};

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Directed multigraph with polynomial edge weights. Edge id = position in
/// edges(). Immutable once constructed.
class ParametricGraph {
 public:
  ParametricGraph() = default;

  ParametricGraph(std::size_t n, std::vector<ParametricEdge> edges) : n_(n), edges_(std::move(edges)) {
    for (const auto& e : edges_) {
      if (e.src >= n_ || e.dst >= n_) throw std::out_of_range("edge endpoint out of range");
      degree_ = std::max(degree_, e.weight.degree());
    }
    fingerprint_ = fnv1a(to_pwg());
  }

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<ParametricEdge>& edges() const { return edges_; }
  const ParametricEdge& edge(EdgeId id) const { return edges_.at(id); }

  /// Maximum edge-weight degree.
  int degree_bound() const { return degree_; }

  /// Hash of the canonical .pwg serialization; ties advice to its graph.
  std::uint64_t fingerprint() const { return fingerprint_; }

  /// Canonical text form: header "n m d", then one "src dst c0 .. cd" line per
  /// edge with every edge padded to d+1 coefficients.
  std::string to_pwg() const {
    std::string out = std::to_string(n_) + ' ' + std::to_string(edges_.size()) + ' ' + std::to_string(degree_) + '\n';
    for (const auto& e : edges_) {
      out += std::to_string(e.src);
      out += ' ';
      out += std::to_string(e.dst);
      for (int k = 0; k <= degree_; ++k) {
        out += ' ';
        out += format_rational(e.weight.coefficient(static_cast<std::size_t>(k)));
      }
      out += '\n';
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<ParametricEdge> edges_;
  int degree_ = 0;
  std::uint64_t fingerprint_ = fnv1a("0 0 0\n");
};

/// Parses .pwg text. '#' starts a comment running to end of line.
inline ParametricGraph parse_pwg(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks{std::istream_iterator<std::string>(ls), std::istream_iterator<std::string>()};
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  if (lines.empty()) throw ParseError("pwg: missing header");
  const auto& head = lines.front();
  if (head.size() != 3) throw ParseError("pwg: header must be 'n m d'");
  auto to_count = [](const std::string& s, const char* what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError(std::string("pwg: bad ") + what + ": " + s);
    }
    return std::stoull(s);
  };
  std::size_t n = to_count(head[0], "vertex count");
  std::size_t m = to_count(head[1], "edge count");
  std::size_t d = to_count(head[2], "degree");
  if (lines.size() != m + 1) {
    throw ParseError("pwg: expected " + std::to_string(m) + " edge lines, found " + std::to_string(lines.size() - 1));
  }
  std::vector<ParametricEdge> edges;
  edges.reserve(m);
  for (std::size_t i = 1; i <= m; ++i) {
    const auto& toks = lines[i];
    if (toks.size() != d + 3) throw ParseError("pwg: edge line " + std::to_string(i) + " needs d+3 fields");
    ParametricEdge e;
    auto src = to_count(toks[0], "source");
    auto dst = to_count(toks[1], "target");
    if (src >= n || dst >= n) throw ParseError("pwg: edge line " + std::to_string(i) + " endpoint out of range");
    e.src = static_cast<Vertex>(src);
    e.dst = static_cast<Vertex>(dst);
    std::vector<Rational> coeffs;
    for (std::size_t k = 2; k < toks.size(); ++k) coeffs.push_back(parse_rational(toks[k]));
    e.weight = PolyWeight(std::move(coeffs));
    edges.push_back(std::move(e));
  }
  return ParametricGraph(n, std::move(edges));
}

inline ParametricGraph load_pwg(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open graph file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pwg(text);
}

template <class T>
struct WeightedEdge {
  Vertex src = 0;
  Vertex dst = 0;
  T weight{};
  EdgeId source_id = 0;
};

/// A concrete weighted digraph with a CSR out-adjacency.
template <class T>
class InstantiatedGraph {
 public:
  InstantiatedGraph() = default;

  InstantiatedGraph(std::size_t n, std::vector<WeightedEdge<T>> edges) : n_(n), edges_(std::move(edges)) {
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) ++offsets_[e.src + 1];
    for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
    out_.resize(edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) out_[fill[edges_[i].src]++] = static_cast<std::uint32_t>(i);
  }

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<WeightedEdge<T>>& edges() const { return edges_; }

  /// Positions in edges() of the edges leaving v.
  std::span<const std::uint32_t> out_edges(Vertex v) const {
    return {out_.data() + offsets_[v], out_.data() + offsets_[v + 1]};
  }

  /// Same vertex set with every edge flipped; source ids preserved.
  InstantiatedGraph reversed() const {
    std::vector<WeightedEdge<T>> rev = edges_;
    for (auto& e : rev) std::swap(e.src, e.dst);
    return InstantiatedGraph(n_, std::move(rev));
  }

 private:
  std::size_t n_ = 0;
  std::vector<WeightedEdge<T>> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> out_;
};

/// G(r): every edge weight replaced by its value at r.
inline InstantiatedGraph<Rational> instantiate(const ParametricGraph& g, const Rational& r) {
  std::vector<WeightedEdge<Rational>> edges;
  edges.reserve(g.edge_count());
  for (EdgeId i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edge(i);
    edges.push_back({e.src, e.dst, evaluate(e.weight, r), i});
  }
  return InstantiatedGraph<Rational>(g.vertex_count(), std::move(edges));
}

/// Instantiation with arbitrary per-edge weights (e.g. reweighted or floating).
template <class T, class WeightFn>
InstantiatedGraph<T> instantiate_with(const ParametricGraph& g, WeightFn&& weight_of) {
  std::vector<WeightedEdge<T>> edges;
  edges.reserve(g.edge_count());
  for (EdgeId i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edge(i);
    edges.push_back({e.src, e.dst, static_cast<T>(weight_of(i, e)), i});
  }
  return InstantiatedGraph<T>(g.vertex_count(), std::move(edges));
}

/// Sum of edge weights along an edge-id sequence.
inline PolyWeight path_weight(const ParametricGraph& g, const std::vector<EdgeId>& path) {
  PolyWeight sum;
  for (EdgeId e : path) sum += g.edge(e).weight;
  return sum;
}

/// Reflexive-transitive reachability; reach[u * n + v] != 0 iff v is reachable from u.
inline std::vector<char> reachability(const ParametricGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<Vertex>> adj(n);
  for (const auto& e : g.edges()) adj[e.src].push_back(e.dst);
  std::vector<char> reach(n * n, 0);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    char* row = reach.data() + static_cast<std::size_t>(s) * n;
    row[s] = 1;
    stack.assign(1, s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : adj[x]) {
        if (!row[y]) {
          row[y] = 1;
          stack.push_back(y);
        }
      }
    }
  }
  return reach;
}

}  // namespace psp
