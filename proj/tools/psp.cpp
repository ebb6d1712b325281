// psp: build advice for a parametric graph, answer instantiated queries from
// it, and compare against Bellman-Ford.
//
// Exit codes: 0 ok, 1 other error, 2 parse error, 3 infeasible / negative
// cycle in interval, 4 size budget exceeded, 5 advice does not match graph,
// 6 x outside the advice interval.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psp/psp.hpp"

using namespace psp;

namespace {

enum Exit : int { kOk = 0, kError = 1, kParse = 2, kInfeasible = 3, kBudget = 4, kMismatch = 5, kOutOfInterval = 6 };

struct ExitError : std::runtime_error {
  ExitError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
  int code;
};

struct Flags {
  std::string input, advice, output, pairs;
  std::string kind = "linear";
  std::optional<std::string> x, alpha, beta, epsilon, gamma, tol;
  std::optional<std::size_t> source, target;
  std::optional<std::size_t> n0, n1, hop_limit, hubs;
  std::uint64_t seed = 0;
  bool emit_path = false;
  std::size_t trials = 100;
  bool interval = false;
  std::size_t gen_n = 10, gen_m = 30;
  int gen_degree = 1;
  bool gen_feasible = false;
};

struct Query {
  Vertex u = 0;
  std::optional<Vertex> v;
  Rational x;
};

Rational rational_flag(const std::optional<std::string>& s, const char* name) {
  if (!s) throw ExitError(kParse, std::string("missing --") + name);
  return parse_rational(*s);
}

void check_vertex(const ParametricGraph& g, std::size_t v) {
  if (v >= g.vertex_count()) throw ExitError(kError, "vertex " + std::to_string(v) + " out of range");
}

/// Queries from --pairs, or the single one named by --source/--target/--x.
std::vector<Query> queries(const Flags& f, const ParametricGraph& g, bool target_required) {
  std::vector<Query> out;
  if (!f.pairs.empty()) {
    std::istringstream in(read_text_file(f.pairs));
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string u, v, x, extra;
      if (!(ls >> u)) continue;
      if (!(ls >> v >> x) || (ls >> extra)) throw ParseError("pairs: expected 'u v x', got: " + line);
      Query q{static_cast<Vertex>(std::stoul(u)), static_cast<Vertex>(std::stoul(v)), parse_rational(x)};
      check_vertex(g, q.u);
      check_vertex(g, *q.v);
      out.push_back(std::move(q));
    }
    return out;
  }
  if (!f.source) throw ExitError(kParse, "need --source (or --pairs)");
  if (target_required && !f.target) throw ExitError(kParse, "need --target (or --pairs)");
  check_vertex(g, *f.source);
  Query q{static_cast<Vertex>(*f.source), std::nullopt, rational_flag(f.x, "x")};
  if (f.target) {
    check_vertex(g, *f.target);
    q.v = static_cast<Vertex>(*f.target);
  }
  out.push_back(std::move(q));
  return out;
}

std::string vertex_path(const ParametricGraph& g, Vertex u, const std::vector<EdgeId>& edges) {
  std::string s = std::to_string(u);
  for (EdgeId e : edges) s += "," + std::to_string(g.edge(e).dst);
  return s;
}

void emit(std::ostream& os, const Flags& f, Vertex u, Vertex v, const Rational& x, const ExtendedValue& value,
          const std::optional<std::string>& path) {
  os << u << ' ' << v << ' ' << format_rational(x) << ' ' << format_extended(value);
  if (f.emit_path) os << ' ' << (path ? *path : "-");
  os << '\n';
}

SurplusParams surplus_params(const Flags& f) {
  SurplusParams p;
  p.alpha = rational_flag(f.alpha, "alpha");
  p.beta = rational_flag(f.beta, "beta");
  p.epsilon = rational_flag(f.epsilon, "epsilon");
  if (f.gamma) p.gamma = parse_rational(*f.gamma);
  p.seed = f.seed;
  p.n0 = f.n0;
  p.n1 = f.n1;
  p.hop_limit = f.hop_limit;
  p.hubs = f.hubs;
  return p;
}

PairOracleOptions minbase_options(const Flags& f) {
  PairOracleOptions opt;
  if (f.tol) opt.tol = parse_rational(*f.tol);
  if (f.alpha || f.beta) {
    Domain d;
    if (f.alpha) d.lo = ExtendedValue(parse_rational(*f.alpha));
    if (f.beta) d.hi = ExtendedValue(parse_rational(*f.beta));
    opt.hint = d;
  }
  return opt;
}

AnyAdvice build(const Flags& f, const ParametricGraph& g) {
  switch (parse_kind(f.kind)) {
    case AdviceKind::Linear:
      return preprocess_linear(g);
    case AdviceKind::MinBase:
      return build_pair_oracle(g, minbase_options(f));
    default:
      return preprocess_surplus(g, surplus_params(f));
  }
}

void summary(std::ostream& os, const ParametricGraph& g, const AnyAdvice& any) {
  os << "n=" << g.vertex_count() << "\nm=" << g.edge_count() << "\nd=" << g.degree_bound() << '\n';
  if (const auto* a = std::get_if<LinearAdvice>(&any)) {
    os << "kind=linear\ninterval=" << detail::interval_text(a->interval) << "\nfamilies=" << a->families.size() << '\n';
  } else if (const auto* o = std::get_if<PairOracle>(&any)) {
    std::size_t max_breaks = 0;
    bool approximate = false;
    for (Vertex u = 0; u < o->vertex_count(); ++u) {
      for (Vertex v = 0; v < o->vertex_count(); ++v) {
        max_breaks = std::max(max_breaks, o->final_base(u, v).size());
        approximate = approximate || o->final_base(u, v).approximate();
      }
    }
    os << "kind=minbase\nlevel=" << o->level() << "\nfinal_pieces=" << detail::total_pieces(*o, true)
       << "\nmax_breaks=" << max_breaks << "\napproximate=" << approximate << '\n';
  } else {
    const auto& s = std::get<SurplusAdvice>(any);
    const auto& c = s.constants;
    os << "kind=surplus\nK=" << format_rational(c.K) << "\nN0=" << c.n0 << "\nN1=" << c.n1
       << "\nrho0=" << format_rational(c.rho0) << "\nrho1=" << format_rational(c.rho1) << "\nhop_limit=" << c.hop_limit
       << "\nhub_draws=" << c.hub_draws << "\nhubs=" << s.hubs.size() << '\n';
  }
}

std::uint64_t provenance_of(const AnyAdvice& any) {
  return std::visit(
      [](const auto& a) -> std::uint64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(a)>, PairOracle>) {
          return a.provenance();
        } else {
          return a.provenance;
        }
      },
      any);
}

int cmd_preprocess(const Flags& f) {
  auto g = load_pwg(f.input);
  auto advice = build(f, g);
  auto text = serialize(advice);
  if (!f.output.empty()) write_text_file(f.output, text);
  summary(std::cout, g, advice);
  std::cout << "provenance=" << hex64(g.fingerprint()) << "\nadvice_bytes=" << text.size() << '\n';
  return kOk;
}

void query_linear(const Flags& f, const ParametricGraph& g, const LinearAdvice& a) {
  LinearInstantiator fast(a, g);
  for (const auto& q : queries(f, g, false)) {
    auto res = fast(q.u, q.x);
    std::vector<Vertex> targets;
    if (q.v) {
      targets.push_back(*q.v);
    } else {
      for (Vertex v = 0; v < g.vertex_count(); ++v) targets.push_back(v);
    }
    const auto* sp = std::get_if<ShortestPathResult<Rational>>(&res);
    for (Vertex v : targets) {
      if (!sp) {
        emit(std::cout, f, q.u, v, q.x, ExtendedValue::minus_infinity(), std::nullopt);
        continue;
      }
      std::optional<std::string> path;
      if (sp->dist[v].is_finite()) {
        std::vector<EdgeId> edges;
        for (Vertex x = v; x != q.u; x = g.edge(*sp->parent[x]).src) edges.push_back(*sp->parent[x]);
        path = vertex_path(g, q.u, {edges.rbegin(), edges.rend()});
      }
      emit(std::cout, f, q.u, v, q.x, sp->dist[v], path);
    }
  }
}

void query_minbase(const Flags& f, const ParametricGraph& g, const PairOracle& o) {
  for (const auto& q : queries(f, g, true)) {
    if (!o.domain().contains(q.x)) throw ExitError(kOutOfInterval, "x = " + format_rational(q.x) + " outside the oracle domain");
    auto hit = o.query(q.u, *q.v, q.x);
    std::optional<std::string> path;
    if (hit.value.is_finite()) path = vertex_path(g, q.u, materialize(hit.path));
    emit(std::cout, f, q.u, *q.v, q.x, hit.value, path);
  }
}

void query_surplus(const Flags& f, const ParametricGraph& g, const SurplusAdvice& a) {
  for (const auto& q : queries(f, g, true)) {
    auto z = psp::query_surplus(a, q.u, *q.v, q.x);
    std::optional<std::string> path;
    if (z.value.is_finite()) path = vertex_path(g, q.u, surplus_path(a, g, q.u, *q.v, z.path));
    emit(std::cout, f, q.u, *q.v, q.x, z.value, path);
  }
}

int cmd_query(const Flags& f) {
  auto g = load_pwg(f.input);
  auto advice = parse_advice(read_text_file(f.advice));
  if (provenance_of(advice) != g.fingerprint()) throw AdviceMismatch();
  if (const auto* a = std::get_if<LinearAdvice>(&advice)) {
    query_linear(f, g, *a);
  } else if (const auto* o = std::get_if<PairOracle>(&advice)) {
    query_minbase(f, g, *o);
  } else {
    query_surplus(f, g, std::get<SurplusAdvice>(advice));
  }
  return kOk;
}

int cmd_oracle(const Flags& f) {
  auto g = load_pwg(f.input);
  if (f.interval) {
    auto iv = oracle::brute_interval(g);
    if (!iv) {
      std::cout << "interval=none\n";
      return kInfeasible;
    }
    FeasibleInterval shown{iv->alpha, iv->beta, iv->alpha_witness, iv->beta_witness};
    std::cout << "interval=" << detail::interval_text(shown) << '\n';
    return kOk;
  }
  for (const auto& q : queries(f, g, false)) {
    auto d = oracle::bellman_ford_distances(instantiate(g, q.x), q.u);
    if (q.v) {
      emit(std::cout, f, q.u, *q.v, q.x, d[*q.v], std::nullopt);
      continue;
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v) emit(std::cout, f, q.u, v, q.x, d[v], std::nullopt);
  }
  return kOk;
}

int cmd_bench(const Flags& f) {
  auto g = load_pwg(f.input);
  if (f.trials == 0) {
    std::cout << "trials=0\n";
    return kOk;
  }
  auto t0 = std::chrono::steady_clock::now();
  AnyAdvice advice = f.advice.empty() ? build(f, g) : parse_advice(read_text_file(f.advice));
  auto t1 = std::chrono::steady_clock::now();
  if (provenance_of(advice) != g.fingerprint()) throw AdviceMismatch();

  BenchReport rep;
  std::string kind;
  if (const auto* a = std::get_if<LinearAdvice>(&advice)) {
    kind = "linear";
    auto [lo, hi] = finite_window(a->interval.alpha, a->interval.beta);
    LinearInstantiator fast(*a, g);
    rep = run_bench(g, bench_trials(g.vertex_count(), f.trials, f.seed, lo, hi),
                    [&](const BenchTrial& t) { return fast(t.source, t.r).index(); });
  } else if (const auto* o = std::get_if<PairOracle>(&advice)) {
    kind = "minbase";
    auto [lo, hi] = finite_window(o->domain().lo, o->domain().hi);
    rep = run_bench(g, bench_trials(g.vertex_count(), f.trials, f.seed, lo, hi),
                    [&](const BenchTrial& t) { return o->query(t.source, t.target, t.r).comparisons; });
  } else {
    kind = "surplus";
    const auto& s = std::get<SurplusAdvice>(advice);
    rep = run_bench(g, bench_trials(g.vertex_count(), f.trials, f.seed, s.params.alpha, s.params.beta),
                    [&](const BenchTrial& t) { return psp::query_surplus(s, t.source, t.target, t.r).touches; });
  }
  std::cout << "kind=" << kind << "\nn=" << g.vertex_count() << "\nm=" << g.edge_count() << "\ntrials=" << rep.trials
            << "\nseed=" << f.seed
            << "\npreprocess_ms=" << std::chrono::duration<double, std::milli>(t1 - t0).count()
            << "\nmean_query_us=" << rep.fast_mean_us << "\nmean_bellman_ford_us=" << rep.scratch_mean_us
            << "\nspeedup=" << rep.speedup() << '\n';
  return kOk;
}

int cmd_generate(const Flags& f) {
  SplitMix64 rng(f.seed);
  ParametricGraph g;
  if (f.gen_feasible) {
    Rational lo = f.alpha ? parse_rational(*f.alpha) : Rational(0);
    Rational hi = f.beta ? parse_rational(*f.beta) : Rational(1);
    g = random_feasible_linear_graph(rng, f.gen_n, f.gen_m, lo, hi);
  } else {
    g = random_poly_graph(rng, f.gen_n, f.gen_m, f.gen_degree);
  }
  if (f.output.empty()) {
    std::cout << g.to_pwg();
  } else {
    write_text_file(f.output, g.to_pwg());
  }
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Parametric shortest paths: preprocess once, instantiate fast."};
  app.require_subcommand(1);
  Flags f;

  auto input = [&](CLI::App* s) { s->add_option("-i,--input", f.input, "graph file (.pwg)")->required(); };
  auto rationals = [&](CLI::App* s) {
    s->add_option("--alpha", f.alpha, "interval lower end");
    s->add_option("--beta", f.beta, "interval upper end");
  };
  auto build_flags = [&](CLI::App* s) {
    s->add_option("--kind", f.kind, "linear | minbase | surplus")
        ->check(CLI::IsMember({"linear", "minbase", "surplus"}));
    rationals(s);
    s->add_option("--epsilon", f.epsilon, "surplus bound");
    s->add_option("--gamma", f.gamma, "bound on every edge slope");
    s->add_option("--seed", f.seed, "random seed");
    s->add_option("--override-n0", f.n0, "crude grid steps");
    s->add_option("--override-n1", f.n1, "refined grid steps");
    s->add_option("--override-hoplimit", f.hop_limit, "vertices per crude path");
    s->add_option("--override-hubs", f.hubs, "hub draws");
    s->add_option("--tol", f.tol, "root tolerance for approximate breaks");
  };
  auto query_flags = [&](CLI::App* s) {
    s->add_option("--x", f.x, "instantiation value");
    s->add_option("--source", f.source, "source vertex");
    s->add_option("--target", f.target, "target vertex");
    s->add_option("--pairs", f.pairs, "file of 'u v x' lines");
    s->add_flag("--emit-path", f.emit_path, "append the path as a vertex list");
  };

  auto* pre = app.add_subcommand("preprocess", "build advice and print a key=value summary");
  input(pre);
  build_flags(pre);
  pre->add_option("-o,--output", f.output, "advice file to write");

  auto* query = app.add_subcommand("query", "answer queries from advice");
  input(query);
  query->add_option("-a,--advice", f.advice, "advice file")->required();
  query_flags(query);

  auto* oracle_cmd = app.add_subcommand("oracle", "exact distances by Bellman-Ford, or the brute-force interval");
  input(oracle_cmd);
  query_flags(oracle_cmd);
  oracle_cmd->add_flag("--interval", f.interval, "print the feasible interval from cycle enumeration");

  auto* bench = app.add_subcommand("bench", "time queries against Bellman-Ford from scratch");
  input(bench);
  build_flags(bench);
  bench->add_option("-a,--advice", f.advice, "advice file (built in-process if absent)");
  bench->add_option("--trials", f.trials, "number of trials");

  auto* gen = app.add_subcommand("generate", "write a random graph");
  gen->add_option("--n", f.gen_n, "vertices");
  gen->add_option("--m", f.gen_m, "edges");
  gen->add_option("--degree", f.gen_degree, "weight degree")->check(CLI::Range(0, 8));
  gen->add_option("--seed", f.seed, "random seed");
  gen->add_flag("--feasible", f.gen_feasible, "linear graph with no negative cycle on [alpha, beta]");
  rationals(gen);
  gen->add_option("-o,--output", f.output, "output file (stdout if absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*pre) return cmd_preprocess(f);
    if (*query) return cmd_query(f);
    if (*oracle_cmd) return cmd_oracle(f);
    if (*bench) return cmd_bench(f);
    return cmd_generate(f);
  } catch (const ExitError& e) {
    std::cerr << "psp: " << e.what() << '\n';
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "psp: parse error: " << e.what() << '\n';
    return kParse;
  } catch (const NeverFeasible& e) {
    std::cerr << "psp: " << e.what() << '\n';
    return kInfeasible;
  } catch (const NegativeCycleInInterval& e) {
    std::cerr << "psp: " << e.what() << '\n';
    return kInfeasible;
  } catch (const SizeBudgetExceeded& e) {
    std::cerr << "psp: " << e.what() << '\n';
    return kBudget;
  } catch (const GridTooLarge& e) {
    std::cerr << "psp: " << e.what() << '\n';
    return kBudget;
  } catch (const AdviceMismatch& e) {
    std::cerr << "psp: " << e.what() << '\n';
    return kMismatch;
  } catch (const OutOfInterval& e) {
    std::cerr << "psp: " << e.what() << '\n';
    return kOutOfInterval;
  } catch (const std::exception& e) {
    std::cerr << "psp: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
