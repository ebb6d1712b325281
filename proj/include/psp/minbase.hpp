#pragma once

// Piecewise-polynomial lower envelopes ("minBases") and the all-pairs distance
// oracle built from them by doubling the allowed path length.
//
// A MinBase with breaks b_1 < ... < b_t holds t+1 pieces; piece k is active on
// [b_k, b_{k+1}] with b_0 = -inf and b_{t+1} = +inf. Each piece is a polynomial
// (tagged with the path it measures) or one of the sentinels +inf / -inf.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "psp/graph.hpp"

namespace psp {

// ---------------------------------------------------------------------------
// Path tags: persistent binary concatenation trees, so tagging a sum costs O(1).

struct PathNode;
using PathTag = std::shared_ptr<const PathNode>;

struct PathNode {
  std::int64_t edge = -1;  // leaf edge id; -1 with no children is the empty path
  PathTag left;
  PathTag right;
};

inline PathTag empty_path() { return std::make_shared<const PathNode>(); }
inline PathTag edge_path(EdgeId id) { return std::make_shared<const PathNode>(PathNode{id, nullptr, nullptr}); }
inline PathTag concat(PathTag a, PathTag b) {
  return std::make_shared<const PathNode>(PathNode{-1, std::move(a), std::move(b)});
}

/// Edge ids in order; linear in the path length.
inline std::vector<EdgeId> materialize(const PathTag& tag) {
  std::vector<EdgeId> out;
  std::vector<const PathNode*> stack;
  if (tag) stack.push_back(tag.get());
  while (!stack.empty()) {
    const PathNode* n = stack.back();
    stack.pop_back();
    if (n->edge >= 0) {
      out.push_back(static_cast<EdgeId>(n->edge));
      continue;
    }
    if (n->right) stack.push_back(n->right.get());
    if (n->left) stack.push_back(n->left.get());
  }
  return out;
}

// ---------------------------------------------------------------------------

/// A breakpoint. radius > 0 marks an approximate root: the true crossing lies
/// within radius of `at`.
struct Break {
  Rational at;
  Rational radius = 0;

  bool exact() const { return radius == 0; }
  friend bool operator==(const Break&, const Break&) = default;
};

struct Piece {
  enum class Kind : std::uint8_t { Poly, PlusInfinity, MinusInfinity };

  Kind kind = Kind::PlusInfinity;
  PolyWeight poly;
  PathTag tag;

  static Piece plus_infinity() { return {}; }
  static Piece minus_infinity() { return {Kind::MinusInfinity, {}, nullptr}; }
  static Piece of(PolyWeight p, PathTag t = nullptr) { return {Kind::Poly, std::move(p), std::move(t)}; }

  bool is_poly() const { return kind == Kind::Poly; }

  /// Same function (tags ignored).
  bool same_function(const Piece& o) const { return kind == o.kind && (kind != Kind::Poly || poly == o.poly); }

  ExtendedValue at(const Rational& r) const {
    switch (kind) {
      case Kind::PlusInfinity:
        return ExtendedValue::plus_infinity();
      case Kind::MinusInfinity:
        return ExtendedValue::minus_infinity();
      default:
        return ExtendedValue(evaluate(poly, r));
    }
  }
};

struct Lookup {
  ExtendedValue value;
  PathTag path;
  /// r fell within the radius of an approximate break.
  bool approximate = false;
  /// Three-way comparisons of r against breaks.
  std::size_t comparisons = 0;
};

class MinBase {
 public:
  /// +inf everywhere.
  MinBase() : pieces_{Piece::plus_infinity()} {}

  explicit MinBase(Piece only) : pieces_{std::move(only)} {}

  MinBase(std::vector<Break> breaks, std::vector<Piece> pieces) : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
    if (pieces_.size() != breaks_.size() + 1) throw std::invalid_argument("MinBase: need one more piece than breaks");
    for (std::size_t i = 1; i < breaks_.size(); ++i) {
      if (!(breaks_[i - 1].at < breaks_[i].at)) throw std::invalid_argument("MinBase: breaks must increase");
    }
  }

  const std::vector<Break>& breaks() const { return breaks_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Number of breaks.
  std::size_t size() const { return breaks_.size(); }
  std::size_t piece_count() const { return pieces_.size(); }

  bool approximate() const {
    return std::any_of(breaks_.begin(), breaks_.end(), [](const Break& b) { return !b.exact(); });
  }

  bool is_plus_infinity() const { return pieces_.size() == 1 && pieces_[0].kind == Piece::Kind::PlusInfinity; }

  /// Lower bound of piece k's interval.
  ExtendedValue piece_lo(std::size_t k) const {
    return k == 0 ? ExtendedValue::minus_infinity() : ExtendedValue(breaks_[k - 1].at);
  }
  ExtendedValue piece_hi(std::size_t k) const {
    return k == breaks_.size() ? ExtendedValue::plus_infinity() : ExtendedValue(breaks_[k].at);
  }

  /// Binary search over breaks, then evaluation. At a break (or within the
  /// radius of an approximate one) both neighbours are candidates: the smaller
  /// finite value wins, and -inf only when both sides are -inf.
  Lookup evaluate(const Rational& r) const {
    Lookup out;
    std::size_t lo = 0;
    std::size_t hi = breaks_.size();
    std::optional<std::size_t> hit;
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      ++out.comparisons;
      const Break& b = breaks_[mid];
      if (r < b.at - b.radius) {
        hi = mid;
      } else if (r > b.at + b.radius) {
        lo = mid + 1;
      } else {
        hit = mid;
        break;
      }
    }
    if (!hit) {
      out.value = pieces_[lo].at(r);
      out.path = pieces_[lo].tag;
      return out;
    }
    out.approximate = !breaks_[*hit].exact();
    const Piece& left = pieces_[*hit];
    const Piece& right = pieces_[*hit + 1];
    ExtendedValue lv = left.at(r);
    ExtendedValue rv = right.at(r);
    bool take_left;
    if (lv.is_minus_infinity() != rv.is_minus_infinity()) {
      take_left = rv.is_minus_infinity();
    } else {
      take_left = lv <= rv;
    }
    out.value = take_left ? lv : rv;
    out.path = take_left ? left.tag : right.tag;
    return out;
  }

  /// Same breaks and same piece functions.
  friend bool operator==(const MinBase& a, const MinBase& b) {
    if (a.breaks_ != b.breaks_ || a.pieces_.size() != b.pieces_.size()) return false;
    for (std::size_t k = 0; k < a.pieces_.size(); ++k) {
      if (!a.pieces_[k].same_function(b.pieces_[k])) return false;
    }
    return true;
  }

 private:
  std::vector<Break> breaks_;
  std::vector<Piece> pieces_;
};

/// Restricts where crossings are searched for. Outside it the merges keep the
/// first operand's piece.
struct Domain {
  ExtendedValue lo = ExtendedValue::minus_infinity();
  ExtendedValue hi = ExtendedValue::plus_infinity();

  bool contains(const Rational& r) const {
    ExtendedValue x(r);
    return lo <= x && x <= hi;
  }
};

struct MergeOptions {
  Rational tol = default_root_tolerance();
  Domain domain;
};

namespace detail {

// Appends pieces, dropping the break between identical neighbours.
class EnvelopeBuilder {
 public:
  void start(Piece p) { pieces_.push_back(std::move(p)); }

  void push(Break b, Piece p) {
    if (pieces_.back().same_function(p)) return;
    breaks_.push_back(std::move(b));
    pieces_.push_back(std::move(p));
  }

  MinBase finish() { return MinBase(std::move(breaks_), std::move(pieces_)); }

 private:
  std::vector<Break> breaks_;
  std::vector<Piece> pieces_;
};

// Walks the merged break sequence of a and b, calling fn(lo, hi, piece_a,
// piece_b, break_at_lo) for every elementary interval.
template <class Fn>
void for_each_elementary(const MinBase& a, const MinBase& b, Fn&& fn) {
  std::size_t i = 0;
  std::size_t j = 0;
  ExtendedValue lo = ExtendedValue::minus_infinity();
  std::optional<Break> at_lo;
  const auto& ba = a.breaks();
  const auto& bb = b.breaks();
  while (true) {
    const Break* next = nullptr;
    bool adv_a = false;
    bool adv_b = false;
    if (i < ba.size() && j < bb.size()) {
      if (ba[i].at < bb[j].at) {
        next = &ba[i];
        adv_a = true;
      } else if (bb[j].at < ba[i].at) {
        next = &bb[j];
        adv_b = true;
      } else {
        next = ba[i].radius >= bb[j].radius ? &ba[i] : &bb[j];
        adv_a = adv_b = true;
      }
    } else if (i < ba.size()) {
      next = &ba[i];
      adv_a = true;
    } else if (j < bb.size()) {
      next = &bb[j];
      adv_b = true;
    }
    ExtendedValue hi = next ? ExtendedValue(next->at) : ExtendedValue::plus_infinity();
    fn(lo, hi, a.pieces()[i], b.pieces()[j], at_lo);
    if (!next) return;
    at_lo = *next;
    lo = hi;
    if (adv_a) ++i;
    if (adv_b) ++j;
  }
}

inline ExtendedValue clip_lo(const ExtendedValue& lo, const Domain& d) { return std::max(lo, d.lo); }
inline ExtendedValue clip_hi(const ExtendedValue& hi, const Domain& d) { return std::min(hi, d.hi); }

// Pointwise minimum of two pieces on (lo, hi) as a run of (break, piece)
// segments; the first segment carries no break.
inline std::vector<std::pair<std::optional<Break>, Piece>> lower_of(const Piece& p, const Piece& q,
                                                                    const ExtendedValue& lo, const ExtendedValue& hi,
                                                                    const MergeOptions& opt) {
  using Seg = std::pair<std::optional<Break>, Piece>;
  if (p.kind == Piece::Kind::MinusInfinity) return {Seg{std::nullopt, p}};
  if (q.kind == Piece::Kind::MinusInfinity) return {Seg{std::nullopt, q}};
  if (p.kind == Piece::Kind::PlusInfinity) return {Seg{std::nullopt, q}};
  if (q.kind == Piece::Kind::PlusInfinity) return {Seg{std::nullopt, p}};
  ExtendedValue clo = clip_lo(lo, opt.domain);
  ExtendedValue chi = clip_hi(hi, opt.domain);
  if (!(clo < chi)) return {Seg{std::nullopt, p}};
  PolyWeight diff = p.poly - q.poly;
  if (diff.is_zero()) return {Seg{std::nullopt, p}};
  auto roots = roots_in_interval(diff, clo, chi, opt.tol);
  auto winner = [&](const ExtendedValue& a, const ExtendedValue& b) -> const Piece& {
    return sign_at(diff, interior_point(a, b)) <= 0 ? p : q;
  };
  // Segments (clo, r1), (r1, r2), ..., (rk, chi).
  std::vector<Seg> out;
  ExtendedValue a = clo;
  for (std::size_t k = 0; k <= roots.size(); ++k) {
    ExtendedValue b = k < roots.size() ? ExtendedValue(roots[k].value) : chi;
    const Piece& w = winner(a, b);
    if (k == 0) {
      out.emplace_back(std::nullopt, w);
    } else {
      const Root& root = roots[k - 1];
      out.emplace_back(Break{root.value, root.exact ? Rational(0) : opt.tol}, w);
    }
    a = b;
  }
  return out;
}

inline Piece sum_of(const Piece& p, const Piece& q) {
  if (p.kind == Piece::Kind::PlusInfinity || q.kind == Piece::Kind::PlusInfinity) return Piece::plus_infinity();
  if (p.kind == Piece::Kind::MinusInfinity || q.kind == Piece::Kind::MinusInfinity) return Piece::minus_infinity();
  PathTag tag = (p.tag && q.tag) ? concat(p.tag, q.tag) : nullptr;
  return Piece::of(p.poly + q.poly, std::move(tag));
}

}  // namespace detail

/// Pointwise sum of two envelopes on the merged break sequence.
inline MinBase min_sum(const MinBase& a, const MinBase& b) {
  detail::EnvelopeBuilder out;
  detail::for_each_elementary(a, b, [&](const ExtendedValue&, const ExtendedValue&, const Piece& p, const Piece& q,
                                        const std::optional<Break>& at_lo) {
    Piece s = detail::sum_of(p, q);
    if (at_lo) {
      out.push(*at_lo, std::move(s));
    } else {
      out.start(std::move(s));
    }
  });
  return out.finish();
}

/// Pointwise minimum of two envelopes. Crossing roots become new breaks; on
/// ties the first operand's piece (and path) is kept.
inline MinBase min_envelope(const MinBase& a, const MinBase& b, const MergeOptions& opt = {}) {
  detail::EnvelopeBuilder out;
  bool started = false;
  detail::for_each_elementary(a, b, [&](const ExtendedValue& lo, const ExtendedValue& hi, const Piece& p,
                                        const Piece& q, const std::optional<Break>& at_lo) {
    for (auto& [brk, piece] : detail::lower_of(p, q, lo, hi, opt)) {
      if (!started) {
        out.start(std::move(piece));
        started = true;
      } else {
        out.push(brk ? *brk : *at_lo, std::move(piece));
      }
    }
  });
  return out.finish();
}

/// Balanced-tree reduction: min of the halves, then min of the two results.
inline MinBase min_envelope(std::span<const MinBase> bases, const MergeOptions& opt = {}) {
  if (bases.empty()) return MinBase();
  if (bases.size() == 1) return bases.front();
  std::size_t half = bases.size() / 2;
  return min_envelope(min_envelope(bases.first(half), opt), min_envelope(bases.subspan(half), opt), opt);
}

/// -inf where m < 0, +inf elsewhere.
inline MinBase negative_region(const MinBase& m, const MergeOptions& opt = {}) {
  detail::EnvelopeBuilder out;
  bool started = false;
  auto emit = [&](std::optional<Break> brk, bool negative) {
    Piece p = negative ? Piece::minus_infinity() : Piece::plus_infinity();
    if (!started) {
      out.start(std::move(p));
      started = true;
    } else {
      out.push(std::move(*brk), std::move(p));
    }
  };
  for (std::size_t k = 0; k < m.piece_count(); ++k) {
    const Piece& p = m.pieces()[k];
    std::optional<Break> at_lo;
    if (k > 0) at_lo = m.breaks()[k - 1];
    if (p.kind != Piece::Kind::Poly || p.poly.is_zero()) {
      emit(at_lo, p.kind == Piece::Kind::MinusInfinity);
      continue;
    }
    ExtendedValue lo = detail::clip_lo(m.piece_lo(k), opt.domain);
    ExtendedValue hi = detail::clip_hi(m.piece_hi(k), opt.domain);
    if (!(lo < hi)) {
      emit(at_lo, false);
      continue;
    }
    auto roots = roots_in_interval(p.poly, lo, hi, opt.tol);
    ExtendedValue a = lo;
    for (std::size_t s = 0; s <= roots.size(); ++s) {
      ExtendedValue b = s < roots.size() ? ExtendedValue(roots[s].value) : hi;
      bool neg = sign_at(p.poly, interior_point(a, b)) < 0;
      if (s == 0) {
        emit(at_lo, neg);
      } else {
        emit(Break{roots[s - 1].value, roots[s - 1].exact ? Rational(0) : opt.tol}, neg);
      }
      a = b;
    }
  }
  return out.finish();
}

// ---------------------------------------------------------------------------
// Pair oracle.

class SizeBudgetExceeded : public std::runtime_error {
 public:
  explicit SizeBudgetExceeded(std::size_t pieces)
      : std::runtime_error("minBase grew to " + std::to_string(pieces) + " pieces, over the configured cap") {}
};

struct PairOracleOptions {
  std::size_t piece_cap = 1'000'000;
  Rational tol = default_root_tolerance();
  /// Optional range of instantiations the oracle must answer for.
  std::optional<Domain> hint;
};

class PairOracle {
 public:
  PairOracle() = default;
  PairOracle(std::size_t n, std::size_t level, std::vector<MinBase> final_level, std::vector<MinBase> check_level,
             std::uint64_t provenance, Domain domain)
      : n_(n),
        level_(level),
        final_(std::move(final_level)),
        check_(std::move(check_level)),
        provenance_(provenance),
        domain_(std::move(domain)) {
    if (final_.size() != n_ * n_ || check_.size() != n_ * n_) throw std::invalid_argument("PairOracle: table size");
  }

  std::size_t vertex_count() const { return n_; }
  /// Level L of the final table; paths of up to 2^L edges.
  std::size_t level() const { return level_; }
  std::uint64_t provenance() const { return provenance_; }
  const Domain& domain() const { return domain_; }

  const MinBase& final_base(Vertex u, Vertex v) const { return final_.at(static_cast<std::size_t>(u) * n_ + v); }
  const MinBase& check_base(Vertex u, Vertex v) const { return check_.at(static_cast<std::size_t>(u) * n_ + v); }

  /// delta(u, v) at r: one binary search over the final table's breaks.
  Lookup query(Vertex u, Vertex v, const Rational& r) const {
    if (u >= n_ || v >= n_) throw std::out_of_range("query: vertex out of range");
    if (!domain_.contains(r)) throw std::out_of_range("query: r outside the oracle's domain");
    return final_base(u, v).evaluate(r);
  }

 private:
  std::size_t n_ = 0;
  std::size_t level_ = 0;
  std::vector<MinBase> final_;
  std::vector<MinBase> check_;
  std::uint64_t provenance_ = 0;
  Domain domain_;
};

inline std::size_t ceil_log2(std::size_t n) {
  std::size_t l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

/// Builds level L = ceil(log2 n) (final) and L + 1 (check) by repeated
/// doubling: level l+1 (u,v) = min over w of (level l (u,w) + level l (w,v)).
/// Level 0 is the direct edge envelope, with the empty path on the diagonal.
/// Regions where a negative cycle lies on some u->v walk are then stamped -inf
/// in the final table: w is on such a cycle exactly where final(w,w) < 0. The
/// check table is left as computed, so it differs from final there.
inline PairOracle build_pair_oracle(const ParametricGraph& g, const PairOracleOptions& options = {}) {
  const std::size_t n = g.vertex_count();
  MergeOptions merge{options.tol, options.hint.value_or(Domain{})};
  auto guard = [&](const MinBase& m) {
    if (m.piece_count() > options.piece_cap) throw SizeBudgetExceeded(m.piece_count());
  };

  std::vector<MinBase> cur(n * n);
  {
    std::vector<std::vector<MinBase>> direct(n * n);
    for (Vertex v = 0; v < n; ++v) direct[v * n + v].emplace_back(Piece::of(PolyWeight(), empty_path()));
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
      const auto& e = g.edge(id);
      direct[static_cast<std::size_t>(e.src) * n + e.dst].emplace_back(Piece::of(e.weight, edge_path(id)));
    }
    for (std::size_t k = 0; k < n * n; ++k) {
      cur[k] = min_envelope(std::span<const MinBase>(direct[k]), merge);
      guard(cur[k]);
    }
  }

  const std::size_t L = ceil_log2(n);
  std::vector<MinBase> final_level;
  for (std::size_t level = 0; level <= L; ++level) {
    std::vector<MinBase> next(n * n);
    std::vector<MinBase> routes;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) {
        routes.clear();
        for (Vertex w = 0; w < n; ++w) {
          const MinBase& uw = cur[static_cast<std::size_t>(u) * n + w];
          const MinBase& wv = cur[static_cast<std::size_t>(w) * n + v];
          if (uw.is_plus_infinity() || wv.is_plus_infinity()) continue;
          routes.push_back(min_sum(uw, wv));
          guard(routes.back());
        }
        next[static_cast<std::size_t>(u) * n + v] = min_envelope(std::span<const MinBase>(routes), merge);
        guard(next[static_cast<std::size_t>(u) * n + v]);
      }
    }
    if (level == L) final_level = std::move(cur);
    cur = std::move(next);
  }
  if (n == 0) final_level = cur;
  std::vector<MinBase> check_level = std::move(cur);

  std::vector<MinBase> cycle_mask(n);
  std::vector<char> has_mask(n, 0);
  for (Vertex w = 0; w < n; ++w) {
    cycle_mask[w] = negative_region(final_level[static_cast<std::size_t>(w) * n + w], merge);
    has_mask[w] = !cycle_mask[w].is_plus_infinity();
  }
  if (std::any_of(has_mask.begin(), has_mask.end(), [](char c) { return c != 0; })) {
    auto reach = reachability(g);
    std::vector<MinBase> masks;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) {
        masks.clear();
        for (Vertex w = 0; w < n; ++w) {
          if (has_mask[w] && reach[u * n + w] && reach[w * n + v]) masks.push_back(cycle_mask[w]);
        }
        if (masks.empty()) continue;
        MinBase mask = min_envelope(std::span<const MinBase>(masks), merge);
        auto& f = final_level[static_cast<std::size_t>(u) * n + v];
        f = min_envelope(f, mask, merge);
      }
    }
  }
  return PairOracle(n, L, std::move(final_level), std::move(check_level), g.fingerprint(), merge.domain);
}

}  // namespace psp
