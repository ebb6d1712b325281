#pragma once

// Text serialization of the three advice kinds. Every file opens with
//   PSP-ADVICE v1 kind=<linear|minbase|surplus>
//   sizes key=value ...
// and closes with "provenance <hex>", the fingerprint of the graph it was
// built from. serialize(parse(text)) reproduces text byte for byte.

#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "psp/linear_sssp.hpp"
#include "psp/minbase.hpp"
#include "psp/surplus.hpp"

namespace psp {

enum class AdviceKind { Linear, MinBase, Surplus };

inline const char* kind_name(AdviceKind k) {
  switch (k) {
    case AdviceKind::Linear:
      return "linear";
    case AdviceKind::MinBase:
      return "minbase";
    default:
      return "surplus";
  }
}

inline AdviceKind parse_kind(std::string_view s) {
  if (s == "linear") return AdviceKind::Linear;
  if (s == "minbase") return AdviceKind::MinBase;
  if (s == "surplus") return AdviceKind::Surplus;
  throw ParseError("unknown advice kind: " + std::string(s));
}

namespace detail {

inline const char* advice_magic() { return "PSP-ADVICE"; }

inline void header(std::ostream& os, AdviceKind k) { os << advice_magic() << " v1 kind=" << kind_name(k) << '\n'; }

inline void edge_list(std::ostream& os, const std::vector<EdgeId>& path) {
  for (EdgeId e : path) os << ' ' << e;
}

template <class T>
std::string optional_text(const std::optional<T>& v) {
  if (!v) return "none";
  if constexpr (std::is_same_v<T, Rational>) {
    return format_rational(*v);
  } else {
    return std::to_string(*v);
  }
}

inline std::string interval_text(const FeasibleInterval& iv) {
  return std::string(iv.alpha.is_minus_infinity() ? "(" : "[") + format_extended(iv.alpha) + "," +
         format_extended(iv.beta) + (iv.beta.is_plus_infinity() ? ")" : "]");
}

inline void witness(std::ostream& os, const char* name, const std::optional<std::vector<EdgeId>>& w) {
  os << name;
  if (!w) {
    os << " none\n";
    return;
  }
  os << " cycle";
  edge_list(os, *w);
  os << '\n';
}

inline void linear_fn(std::ostream& os, const LinearFn& f) {
  os << ' ' << format_rational(f.slope) << ' ' << format_rational(f.intercept);
}

inline void piece(std::ostream& os, const Piece& p) {
  switch (p.kind) {
    case Piece::Kind::PlusInfinity:
      os << "+inf\n";
      return;
    case Piece::Kind::MinusInfinity:
      os << "-inf\n";
      return;
    default:
      break;
  }
  os << "poly";
  for (int k = 0; k <= p.poly.degree(); ++k) os << ' ' << format_rational(p.poly.coefficient(static_cast<std::size_t>(k)));
  os << " |";
  edge_list(os, materialize(p.tag));
  os << '\n';
}

inline void minbase_body(std::ostream& os, const MinBase& m) {
  os << "base " << m.size() << '\n';
  for (std::size_t k = 0; k < m.piece_count(); ++k) {
    if (k > 0) {
      const Break& b = m.breaks()[k - 1];
      os << "at " << format_rational(b.at) << ' ' << format_rational(b.radius) << '\n';
    }
    piece(os, m.pieces()[k]);
  }
}

inline std::size_t total_pieces(const PairOracle& o, bool final_table) {
  std::size_t t = 0;
  for (Vertex u = 0; u < o.vertex_count(); ++u)
    for (Vertex v = 0; v < o.vertex_count(); ++v)
      t += (final_table ? o.final_base(u, v) : o.check_base(u, v)).piece_count();
  return t;
}

// Line-oriented token reader.
class AdviceReader {
 public:
  explicit AdviceReader(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      lines_.emplace_back(std::istream_iterator<std::string>(ls), std::istream_iterator<std::string>());
    }
    while (!lines_.empty() && lines_.back().empty()) lines_.pop_back();
  }

  bool done() const { return pos_ >= lines_.size(); }

  const std::vector<std::string>& next() {
    if (done()) throw ParseError("advice: unexpected end of file");
    return lines_[pos_++];
  }

  /// Next line, which must start with word and have at least min_size tokens.
  const std::vector<std::string>& expect(const char* word, std::size_t min_size = 1) {
    const auto& t = next();
    if (t.empty() || t[0] != word || t.size() < min_size) {
      throw ParseError("advice line " + std::to_string(pos_) + ": expected '" + word + "'");
    }
    return t;
  }

  std::size_t line() const { return pos_; }

 private:
  std::vector<std::vector<std::string>> lines_;
  std::size_t pos_ = 0;
};

inline std::uint64_t to_u64(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw ParseError("advice: bad count " + s);
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError("advice: count out of range " + s);
  }
}

inline std::int64_t to_i64(const std::string& s) {
  try {
    std::size_t used = 0;
    auto v = std::stoll(s, &used);
    if (used != s.size()) throw ParseError("advice: bad integer " + s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("advice: bad integer " + s);
  }
}

inline EdgeId to_edge(const std::string& s) {
  auto v = to_u64(s);
  if (v > 0xffffffffULL) throw ParseError("advice: edge id out of range " + s);
  return static_cast<EdgeId>(v);
}

/// key=value tokens after the first.
inline std::map<std::string, std::string> key_values(const std::vector<std::string>& toks) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos) throw ParseError("advice: expected key=value, got " + toks[i]);
    kv[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
  }
  return kv;
}

inline const std::string& field(const std::map<std::string, std::string>& kv, const char* key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError(std::string("advice: missing field ") + key);
  return it->second;
}

inline std::optional<std::size_t> optional_count(const std::string& s) {
  if (s == "none") return std::nullopt;
  return static_cast<std::size_t>(to_u64(s));
}

inline void read_header(AdviceReader& in, AdviceKind want) {
  const auto& t = in.next();
  if (t.size() != 3 || t[0] != advice_magic() || t[1] != "v1" || t[2] != std::string("kind=") + kind_name(want)) {
    throw ParseError(std::string("advice: expected header for kind ") + kind_name(want));
  }
}

inline std::uint64_t read_provenance(AdviceReader& in) {
  const auto& t = in.expect("provenance", 2);
  const std::string& hex = t[1];
  if (hex.size() != 16 || hex.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw ParseError("advice: bad provenance " + hex);
  }
  if (!in.done()) throw ParseError("advice: trailing content after provenance");
  return std::stoull(hex, nullptr, 16);
}

inline std::vector<EdgeId> edges_from(const std::vector<std::string>& t, std::size_t first) {
  std::vector<EdgeId> out;
  for (std::size_t i = first; i < t.size(); ++i) out.push_back(to_edge(t[i]));
  return out;
}

inline std::optional<std::vector<EdgeId>> read_witness(AdviceReader& in, const char* name) {
  const auto& t = in.expect(name, 2);
  if (t[1] == "none" && t.size() == 2) return std::nullopt;
  if (t[1] != "cycle") throw ParseError(std::string("advice: bad ") + name);
  return edges_from(t, 2);
}

inline FeasibleInterval read_interval(AdviceReader& in) {
  const auto& t = in.expect("interval", 2);
  const std::string& s = t[1];
  auto comma = s.find(',');
  if (s.size() < 5 || comma == std::string::npos || (s.front() != '(' && s.front() != '[') ||
      (s.back() != ')' && s.back() != ']')) {
    throw ParseError("advice: bad interval " + s);
  }
  FeasibleInterval iv;
  iv.alpha = parse_extended(s.substr(1, comma - 1));
  iv.beta = parse_extended(s.substr(comma + 1, s.size() - comma - 2));
  return iv;
}

inline LinearFn read_fn(const std::vector<std::string>& t, std::size_t at) {
  if (t.size() < at + 2) throw ParseError("advice: missing linear function");
  return {parse_rational(t[at]), parse_rational(t[at + 1])};
}

inline Piece read_piece(AdviceReader& in) {
  const auto& t = in.next();
  if (t.size() == 1 && t[0] == "+inf") return Piece::plus_infinity();
  if (t.size() == 1 && t[0] == "-inf") return Piece::minus_infinity();
  if (t.empty() || t[0] != "poly") throw ParseError("advice line " + std::to_string(in.line()) + ": expected piece");
  std::size_t bar = 1;
  while (bar < t.size() && t[bar] != "|") ++bar;
  if (bar == t.size() || bar == 1) throw ParseError("advice: piece needs coefficients and '|'");
  std::vector<Rational> coeffs;
  for (std::size_t i = 1; i < bar; ++i) coeffs.push_back(parse_rational(t[i]));
  PathTag tag = empty_path();
  for (std::size_t i = bar + 1; i < t.size(); ++i) {
    auto leaf = edge_path(to_edge(t[i]));
    tag = i == bar + 1 ? leaf : concat(tag, leaf);
  }
  return Piece::of(PolyWeight(std::move(coeffs)), std::move(tag));
}

inline MinBase read_minbase(AdviceReader& in) {
  std::size_t t = to_u64(in.expect("base", 2)[1]);
  std::vector<Break> breaks;
  std::vector<Piece> pieces;
  pieces.push_back(read_piece(in));
  for (std::size_t k = 0; k < t; ++k) {
    const auto& b = in.expect("at", 3);
    breaks.push_back({parse_rational(b[1]), parse_rational(b[2])});
    pieces.push_back(read_piece(in));
  }
  try {
    return MinBase(std::move(breaks), std::move(pieces));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("advice: ") + e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// linear

inline std::string serialize(const LinearAdvice& a) {
  std::ostringstream os;
  detail::header(os, AdviceKind::Linear);
  os << "sizes n=" << a.vertex_count << " families=" << a.families.size() << '\n';
  os << "interval " << detail::interval_text(a.interval) << '\n';
  detail::witness(os, "alpha_witness", a.interval.alpha_witness);
  detail::witness(os, "beta_witness", a.interval.beta_witness);
  for (std::size_t k = 0; k < a.families.size(); ++k) {
    const auto& fam = a.families[k];
    os << "family " << k << ' ' << format_extended(fam.lo) << ' ' << format_extended(fam.hi) << '\n';
    for (std::size_t v = 0; v < fam.g.size(); ++v) {
      os << v;
      detail::linear_fn(os, fam.g[v]);
      os << '\n';
    }
  }
  os << "provenance " << hex64(a.provenance) << '\n';
  return os.str();
}

inline LinearAdvice parse_linear_advice(std::string_view text) {
  detail::AdviceReader in(text);
  detail::read_header(in, AdviceKind::Linear);
  auto sizes = detail::key_values(in.expect("sizes"));
  LinearAdvice a;
  a.vertex_count = detail::to_u64(detail::field(sizes, "n"));
  std::size_t families = detail::to_u64(detail::field(sizes, "families"));
  if (families < 1 || families > 2) throw ParseError("advice: linear advice has one or two families");
  a.interval = detail::read_interval(in);
  a.interval.alpha_witness = detail::read_witness(in, "alpha_witness");
  a.interval.beta_witness = detail::read_witness(in, "beta_witness");
  for (std::size_t k = 0; k < families; ++k) {
    const auto& t = in.expect("family", 4);
    if (detail::to_u64(t[1]) != k) throw ParseError("advice: families out of order");
    VertexPotential fam;
    fam.lo = parse_extended(t[2]);
    fam.hi = parse_extended(t[3]);
    for (std::size_t v = 0; v < a.vertex_count; ++v) {
      const auto& row = in.next();
      if (row.size() != 3 || detail::to_u64(row[0]) != v) throw ParseError("advice: bad potential line");
      fam.g.push_back(detail::read_fn(row, 1));
    }
    a.families.push_back(std::move(fam));
  }
  a.provenance = detail::read_provenance(in);
  return a;
}

// ---------------------------------------------------------------------------
// minbase

inline std::string serialize(const PairOracle& o) {
  std::ostringstream os;
  const std::size_t n = o.vertex_count();
  detail::header(os, AdviceKind::MinBase);
  os << "sizes n=" << n << " level=" << o.level() << " final_pieces=" << detail::total_pieces(o, true)
     << " check_pieces=" << detail::total_pieces(o, false) << '\n';
  os << "domain " << format_extended(o.domain().lo) << ' ' << format_extended(o.domain().hi) << '\n';
  for (const char* table : {"final", "check"}) {
    const bool is_final = table[0] == 'f';
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) {
        os << table << ' ' << u << ' ' << v << '\n';
        detail::minbase_body(os, is_final ? o.final_base(u, v) : o.check_base(u, v));
      }
    }
  }
  os << "provenance " << hex64(o.provenance()) << '\n';
  return os.str();
}

inline PairOracle parse_minbase_advice(std::string_view text) {
  detail::AdviceReader in(text);
  detail::read_header(in, AdviceKind::MinBase);
  auto sizes = detail::key_values(in.expect("sizes"));
  std::size_t n = detail::to_u64(detail::field(sizes, "n"));
  std::size_t level = detail::to_u64(detail::field(sizes, "level"));
  const auto& d = in.expect("domain", 3);
  Domain domain{parse_extended(d[1]), parse_extended(d[2])};
  std::vector<MinBase> tables[2];
  const char* names[2] = {"final", "check"};
  for (int k = 0; k < 2; ++k) {
    tables[k].reserve(n * n);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        const auto& t = in.expect(names[k], 3);
        if (detail::to_u64(t[1]) != u || detail::to_u64(t[2]) != v) throw ParseError("advice: pairs out of order");
        tables[k].push_back(detail::read_minbase(in));
      }
    }
  }
  std::uint64_t provenance = detail::read_provenance(in);
  return PairOracle(n, level, std::move(tables[0]), std::move(tables[1]), provenance, domain);
}

// ---------------------------------------------------------------------------
// surplus

inline std::string serialize(const SurplusAdvice& a) {
  std::ostringstream os;
  const std::size_t n = a.n();
  const std::size_t H = a.hubs.size();
  const auto& p = a.params;
  const auto& c = a.constants;
  std::size_t crude_defined = 0;
  for (const auto& e : a.crude) crude_defined += e.defined;
  detail::header(os, AdviceKind::Surplus);
  os << "sizes n=" << n << " n0=" << c.n0 << " n1=" << c.n1 << " hubs=" << H << " crude=" << crude_defined
     << " tree_entries=" << a.out_trees.size() << '\n';
  os << "params epsilon=" << format_rational(p.epsilon) << " alpha=" << format_rational(p.alpha)
     << " beta=" << format_rational(p.beta) << " gamma=" << detail::optional_text(p.gamma) << " seed=" << p.seed
     << " n0=" << detail::optional_text(p.n0) << " n1=" << detail::optional_text(p.n1)
     << " hop_limit=" << detail::optional_text(p.hop_limit) << " hubs=" << detail::optional_text(p.hubs)
     << " entry_budget=" << p.entry_budget << '\n';
  os << "constants K=" << format_rational(c.K) << " n0=" << c.n0 << " n1=" << c.n1 << " rho0=" << format_rational(c.rho0)
     << " rho1=" << format_rational(c.rho1) << " hop_limit=" << c.hop_limit << " hub_draws=" << c.hub_draws << '\n';
  os << "hubs";
  for (Vertex h : a.hubs) os << ' ' << h;
  os << '\n';
  for (std::size_t i = 0; i <= c.n0; ++i) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < n * n; ++k) count += a.crude[i * n * n + k].defined;
    os << "crude " << i << ' ' << count << '\n';
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) {
        const auto& e = a.crude_at(i, u, v);
        if (!e.defined) continue;
        os << u << ' ' << v;
        detail::linear_fn(os, e.f);
        os << " |";
        detail::edge_list(os, e.path);
        os << '\n';
      }
    }
  }
  for (std::size_t j = 0; j <= c.n1; ++j) {
    for (std::size_t h = 0; h < H; ++h) {
      for (const char* dir : {"out", "in"}) {
        const bool out = dir[0] == 'o';
        std::size_t count = 0;
        for (Vertex v = 0; v < n; ++v) count += (out ? a.out_at(j, h, v) : a.in_at(j, h, v)).reached;
        os << dir << ' ' << j << ' ' << h << ' ' << count << '\n';
        for (Vertex v = 0; v < n; ++v) {
          const auto& t = out ? a.out_at(j, h, v) : a.in_at(j, h, v);
          if (!t.reached) continue;
          os << v << ' ' << t.parent;
          detail::linear_fn(os, t.f);
          os << '\n';
        }
      }
    }
    os << "minimizer " << j << '\n';
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) os << (v ? " " : "") << a.minimizer_at(j, u, v);
      os << '\n';
    }
  }
  os << "provenance " << hex64(a.provenance) << '\n';
  return os.str();
}

inline SurplusAdvice parse_surplus_advice(std::string_view text) {
  using namespace detail;
  AdviceReader in(text);
  read_header(in, AdviceKind::Surplus);
  auto sizes = key_values(in.expect("sizes"));
  SurplusAdvice a;
  const std::size_t n = a.vertex_count = to_u64(field(sizes, "n"));

  auto pk = key_values(in.expect("params"));
  auto& p = a.params;
  p.epsilon = parse_rational(field(pk, "epsilon"));
  p.alpha = parse_rational(field(pk, "alpha"));
  p.beta = parse_rational(field(pk, "beta"));
  if (field(pk, "gamma") != "none") p.gamma = parse_rational(field(pk, "gamma"));
  p.seed = to_u64(field(pk, "seed"));
  p.n0 = optional_count(field(pk, "n0"));
  p.n1 = optional_count(field(pk, "n1"));
  p.hop_limit = optional_count(field(pk, "hop_limit"));
  p.hubs = optional_count(field(pk, "hubs"));
  p.entry_budget = to_u64(field(pk, "entry_budget"));

  auto ck = key_values(in.expect("constants"));
  auto& c = a.constants;
  c.K = parse_rational(field(ck, "K"));
  c.n0 = to_u64(field(ck, "n0"));
  c.n1 = to_u64(field(ck, "n1"));
  c.rho0 = parse_rational(field(ck, "rho0"));
  c.rho1 = parse_rational(field(ck, "rho1"));
  c.hop_limit = to_u64(field(ck, "hop_limit"));
  c.hub_draws = to_u64(field(ck, "hub_draws"));
  if (to_u64(field(sizes, "n0")) != c.n0 || to_u64(field(sizes, "n1")) != c.n1) {
    throw ParseError("advice: sizes disagree with constants");
  }
  // Tables are sized from these counts before any entry is read.
  const std::size_t limit = std::size_t{1} << 40;
  if (n > (1u << 20) || (c.n0 + 1) > limit / std::max<std::size_t>(n * n, 1) ||
      (c.n1 + 1) > limit / std::max<std::size_t>(n * n, 1)) {
    throw ParseError("advice: tables too large");
  }

  const auto& ht = in.expect("hubs");
  for (std::size_t i = 1; i < ht.size(); ++i) {
    auto h = to_u64(ht[i]);
    if (h >= n) throw ParseError("advice: hub out of range");
    a.hubs.push_back(static_cast<Vertex>(h));
  }
  const std::size_t H = a.hubs.size();
  if (to_u64(field(sizes, "hubs")) != H) throw ParseError("advice: hub count mismatch");

  auto vertex = [&](const std::string& s) {
    auto v = to_u64(s);
    if (v >= n) throw ParseError("advice: vertex out of range " + s);
    return static_cast<Vertex>(v);
  };

  a.crude.resize((c.n0 + 1) * n * n);
  for (std::size_t i = 0; i <= c.n0; ++i) {
    const auto& head = in.expect("crude", 3);
    if (to_u64(head[1]) != i) throw ParseError("advice: crude sections out of order");
    std::size_t count = to_u64(head[2]);
    for (std::size_t k = 0; k < count; ++k) {
      const auto& t = in.next();
      if (t.size() < 5 || t[4] != "|") throw ParseError("advice: bad crude entry");
      CrudeEntry& e = a.crude[(i * n + vertex(t[0])) * n + vertex(t[1])];
      e.defined = true;
      e.f = read_fn(t, 2);
      e.path = edges_from(t, 5);
    }
  }
  a.out_trees.resize((c.n1 + 1) * H * n);
  a.in_trees.resize((c.n1 + 1) * H * n);
  a.minimizer.assign((c.n1 + 1) * n * n, -1);
  for (std::size_t j = 0; j <= c.n1; ++j) {
    for (std::size_t h = 0; h < H; ++h) {
      for (const char* dir : {"out", "in"}) {
        const auto& head = in.expect(dir, 4);
        if (to_u64(head[1]) != j || to_u64(head[2]) != h) throw ParseError("advice: tree sections out of order");
        std::size_t count = to_u64(head[3]);
        auto& trees = dir[0] == 'o' ? a.out_trees : a.in_trees;
        for (std::size_t k = 0; k < count; ++k) {
          const auto& t = in.next();
          if (t.size() != 4) throw ParseError("advice: bad tree entry");
          TreeEntry& e = trees[(j * H + h) * n + vertex(t[0])];
          e.reached = true;
          e.parent = to_i64(t[1]);
          e.f = read_fn(t, 2);
        }
      }
    }
    const auto& head = in.expect("minimizer", 2);
    if (to_u64(head[1]) != j) throw ParseError("advice: minimizer sections out of order");
    for (std::size_t u = 0; u < n; ++u) {
      const auto& row = in.next();
      if (row.size() != n) throw ParseError("advice: minimizer row width");
      for (std::size_t v = 0; v < n; ++v) {
        auto h = to_i64(row[v]);
        if (h < -1 || h >= static_cast<std::int64_t>(H)) throw ParseError("advice: minimizer hub out of range");
        a.minimizer[(j * n + u) * n + v] = static_cast<std::int32_t>(h);
      }
    }
  }
  a.provenance = read_provenance(in);
  return a;
}

// ---------------------------------------------------------------------------

using AnyAdvice = std::variant<LinearAdvice, PairOracle, SurplusAdvice>;

/// Kind from the first line, without parsing the body.
inline AdviceKind peek_kind(std::string_view text) {
  auto eol = text.find('\n');
  std::istringstream ls{std::string(text.substr(0, eol))};
  std::string magic, version, kind;
  ls >> magic >> version >> kind;
  if (magic != detail::advice_magic() || version != "v1" || kind.rfind("kind=", 0) != 0) {
    throw ParseError("advice: missing PSP-ADVICE v1 header");
  }
  return parse_kind(kind.substr(5));
}

inline AnyAdvice parse_advice(std::string_view text) {
  switch (peek_kind(text)) {
    case AdviceKind::Linear:
      return parse_linear_advice(text);
    case AdviceKind::MinBase:
      return parse_minbase_advice(text);
    default:
      return parse_surplus_advice(text);
  }
}

inline std::string serialize(const AnyAdvice& a) {
  return std::visit([](const auto& x) { return serialize(x); }, a);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace psp
