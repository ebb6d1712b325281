// Acceptance run: one PASS/FAIL line per criterion. Criteria 1-8 gate the exit
// status; the benchmark (9) only warns.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "psp/psp.hpp"
#include "support.hpp"

using namespace psp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Records the first few mismatches; anything recorded fails the criterion.
class Tally {
 public:
  void fail(const std::string& what) {
    if (failures_++ < 3) notes_ << (failures_ > 1 ? "; " : "") << what;
  }
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) fail(what);
  }
  std::size_t checks() const { return checks_; }
  std::size_t failures() const { return failures_; }

  Outcome outcome(const std::string& summary) const {
    Outcome o{failures_ == 0, summary + ", " + std::to_string(checks_) + " checks"};
    if (failures_) o.detail += ", " + std::to_string(failures_) + " failed: " + notes_.str();
    return o;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::ostringstream notes_;
};

std::string at_text(const char* what, Vertex u, Vertex v, const Rational& r) {
  return std::string(what) + " (" + std::to_string(u) + "," + std::to_string(v) + ") at " + format_rational(r);
}

// ---------------------------------------------------------------------------
// Shared corpus for criteria 1, 3 and 8.

struct LinearCase {
  ParametricGraph g;
  std::optional<LinearAdvice> advice;
};

std::vector<LinearCase> linear_corpus() {
  SplitMix64 rng(1001);
  std::vector<LinearCase> out;
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng.below(12);
    std::size_t m = rng.below(std::min<std::size_t>(40, 3 * n) + 1);
    LinearCase c{random_linear_graph(rng, n, m), std::nullopt};
    try {
      c.advice = preprocess_linear(c.g);
    } catch (const NeverFeasible&) {
    }
    out.push_back(std::move(c));
  }
  return out;
}

const std::vector<LinearCase>& corpus() {
  static const std::vector<LinearCase> c = linear_corpus();
  return c;
}

bool whole_graph_negative_cycle(const InstantiatedGraph<Rational>& gi) {
  return std::holds_alternative<NegativeCycle>(bellman_ford_virtual_source(gi));
}

// 1. instantiate_sssp == bellman_ford, every source, 20 r inside, 5 outside.
Outcome linear_equivalence() {
  SplitMix64 rng(1002);
  Tally tally;
  std::size_t feasible = 0;
  for (const auto& c : corpus()) {
    const auto& g = c.g;
    const std::size_t n = g.vertex_count();
    if (!c.advice) {
      for (int k = 0; k < 25; ++k) {
        Rational r = random_between(rng, -50, 50);
        tally.check(whole_graph_negative_cycle(instantiate(g, r)), "never-feasible graph clean at " + format_rational(r));
      }
      continue;
    }
    ++feasible;
    const auto& a = *c.advice;
    auto [lo, hi] = finite_window(a.interval.alpha, a.interval.beta, 20);
    std::vector<Rational> inside, outside;
    for (int k = 0; k < 20; ++k) inside.push_back(random_between(rng, lo, hi));
    std::vector<int> sides;
    if (a.interval.alpha.is_finite()) sides.push_back(-1);
    if (a.interval.beta.is_finite()) sides.push_back(+1);
    for (std::size_t k = 0; k < 5 && !sides.empty(); ++k) {
      int side = sides[k % sides.size()];
      Rational step = random_between(rng, Rational(1, 1000), 5);
      outside.push_back(side < 0 ? Rational(a.interval.alpha.value() - step) : Rational(a.interval.beta.value() + step));
    }
    for (const auto* rs : {&inside, &outside}) {
      for (const auto& r : *rs) {
        auto gi = instantiate(g, r);
        const bool infeasible = whole_graph_negative_cycle(gi);
        for (Vertex s = 0; s < n; ++s) {
          auto fast = instantiate_sssp(a, g, s, r);
          bool minus = std::holds_alternative<MinusInfinity>(fast);
          tally.check(minus == infeasible, at_text("-inf verdict", s, s, r));
          if (minus || infeasible) continue;
          auto bf = bellman_ford(gi, s);
          const auto* ref = std::get_if<ShortestPathResult<Rational>>(&bf);
          tally.check(ref && ref->dist == std::get<ShortestPathResult<Rational>>(fast).dist,
                      at_text("distances", s, s, r));
        }
      }
    }
  }
  return tally.outcome(std::to_string(corpus().size()) + " graphs (" + std::to_string(feasible) + " feasible)");
}

// 2. compute_interval == brute_interval, witnesses vanish at their endpoint.
Outcome feasibility_exactness() {
  SplitMix64 rng(1003);
  Tally tally;
  std::size_t never = 0;
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 1 + rng.below(8);
    auto g = random_linear_graph(rng, n, rng.below(2 * n + 1));
    auto brute = oracle::brute_interval(g);
    std::optional<FeasibleInterval> got;
    try {
      got = compute_interval(g);
    } catch (const NeverFeasible&) {
    }
    never += !brute;
    tally.check(got.has_value() == brute.has_value(), "feasibility verdict, graph " + std::to_string(t));
    if (!got || !brute) continue;
    tally.check(got->alpha == brute->alpha && got->beta == brute->beta, "interval, graph " + std::to_string(t));
    if (got->alpha.is_finite()) {
      tally.check(got->alpha_witness && evaluate(cycle_weight(g, *got->alpha_witness), got->alpha.value()) == 0,
                  "alpha witness, graph " + std::to_string(t));
    }
    if (got->beta.is_finite()) {
      tally.check(got->beta_witness && evaluate(cycle_weight(g, *got->beta_witness), got->beta.value()) == 0,
                  "beta witness, graph " + std::to_string(t));
    }
  }
  return tally.outcome("50 graphs (" + std::to_string(never) + " never feasible)");
}

// 3. Every reweighted edge is >= 0 at 50 r per graph, endpoints included.
Outcome reweight_nonnegative() {
  SplitMix64 rng(1004);
  Tally tally;
  for (const auto& c : corpus()) {
    if (!c.advice) continue;
    const auto& a = *c.advice;
    auto [lo, hi] = finite_window(a.interval.alpha, a.interval.beta, 20);
    std::vector<Rational> rs;
    if (a.interval.alpha.is_finite()) rs.push_back(a.interval.alpha.value());
    if (a.interval.beta.is_finite()) rs.push_back(a.interval.beta.value());
    if (a.families.size() == 2) rs.push_back(0);
    while (rs.size() < 50) rs.push_back(random_between(rng, lo, hi));
    for (const auto& r : rs) {
      const auto& pot = family_for(a, r);
      for (EdgeId id = 0; id < c.g.edge_count(); ++id) {
        tally.check(evaluate(reweighted_edge(c.g, pot, id), r) >= 0, "edge " + std::to_string(id) + " at " + format_rational(r));
      }
    }
  }
  return tally.outcome("feasible graphs of criterion 1");
}

// 4 and the minbase half of 7.
struct MinBaseRun {
  Outcome correctness;
  Tally comparisons;
};

/// The approximate break of m that r falls within, if any.
std::optional<Break> approximate_break_at(const MinBase& m, const Rational& r) {
  for (const auto& b : m.breaks()) {
    if (!b.exact() && abs_value(r - b.at) <= b.radius) return b;
  }
  return std::nullopt;
}

/// Exact Bellman-Ford disagrees about -inf at the two ends of the break's
/// uncertainty window, so the true boundary lies inside it.
bool boundary_inside(const ParametricGraph& g, Vertex u, Vertex v, const Break& b) {
  auto lo = oracle::bellman_ford_distances(instantiate(g, b.at - b.radius), u)[v];
  auto hi = oracle::bellman_ford_distances(instantiate(g, b.at + b.radius), u)[v];
  return lo.is_minus_infinity() != hi.is_minus_infinity();
}

MinBaseRun minbase_correctness() {
  SplitMix64 rng(1005);
  MinBaseRun run;
  Tally tally;
  std::size_t within_tol = 0, boundary = 0, minus = 0;
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 1 + rng.below(8);
    int d = static_cast<int>(rng.below(3));
    auto g = random_poly_graph(rng, n, rng.below(std::min<std::size_t>(14, 2 * n) + 1), d);
    auto o = build_pair_oracle(g);
    oracle::BruteForce brute(g);
    std::vector<Rational> rs;
    for (Vertex u = 0; u < n && rs.size() < 40; ++u)
      for (Vertex v = 0; v < n && rs.size() < 40; ++v)
        for (const auto& b : o.final_base(u, v).breaks()) rs.push_back(b.at);
    while (rs.size() < 200) rs.push_back(random_between(rng, -6, 6, 100000));
    for (const auto& r : rs) {
      auto gi = instantiate(g, r);
      for (Vertex u = 0; u < n; ++u) {
        auto bf = oracle::bellman_ford_distances(gi, u);
        for (Vertex v = 0; v < n; ++v) {
          const MinBase& base = o.final_base(u, v);
          auto hit = o.query(u, v, r);
          run.comparisons.check(hit.comparisons <= ceil_log2(base.size() + 2) + 1, at_text("comparisons", u, v, r));
          auto want = brute.distance(u, v, r);
          minus += want.is_minus_infinity();
          bool verdict_ok = hit.value.is_minus_infinity() == bf[v].is_minus_infinity();
          bool value_ok = hit.value == want;
          if (!value_ok && hit.approximate && hit.value.is_finite() && want.is_finite()) {
            double got = hit.value.value().get_d(), ref = want.value().get_d();
            value_ok = std::abs(got - ref) <= 1e-9 * std::max(1.0, std::abs(ref));
            within_tol += value_ok;
          }
          if (verdict_ok && value_ok) {
            tally.check(true, "");
            continue;
          }
          auto b = hit.approximate ? approximate_break_at(base, r) : std::nullopt;
          bool excused = b && !verdict_ok && boundary_inside(g, u, v, *b);
          boundary += excused;
          tally.check(excused, at_text(verdict_ok ? "value" : "-inf verdict", u, v, r));
        }
      }
    }
  }
  run.correctness = tally.outcome("50 graphs, 200 r each, " + std::to_string(minus) + " -inf answers, " +
                                  std::to_string(within_tol) + " values within tolerance and " +
                                  std::to_string(boundary) + " -inf verdicts inside the radius of an approximate break");
  return run;
}

// 5. Envelope of two linear minBases has at most 2(t1+t2)+1 pieces.
Outcome envelope_size() {
  SplitMix64 rng(1006);
  Tally tally;
  std::size_t worst = 0;
  for (int k = 0; k < 200; ++k) {
    std::size_t t1 = rng.below(101);
    std::size_t t2 = rng.below(101 - t1);
    auto a = fixtures::random_linear_minbase(rng, t1);
    auto b = fixtures::random_linear_minbase(rng, t2);
    auto m = min_envelope(a, b);
    worst = std::max(worst, m.piece_count());
    tally.check(m.piece_count() <= 2 * (t1 + t2) + 1, "pair " + std::to_string(k));
    for (const auto& r : fixtures::probe_points(rng, {&a, &b}, 5)) {
      tally.check(m.evaluate(r).value == std::min(a.evaluate(r).value, b.evaluate(r).value), "pointwise min, pair " + std::to_string(k));
    }
  }
  return tally.outcome("200 operand pairs, largest output " + std::to_string(worst) + " pieces");
}

// 6 and the surplus half of 7.
struct SurplusRun {
  Outcome guarantee;
  Tally touches;
};

SurplusRun surplus_guarantee() {
  SplitMix64 rng(1007);
  SurplusRun run;
  Tally lower;
  std::size_t total = 0, over = 0, unreachable = 0;
  for (int t = 0; t < 10; ++t) {
    std::size_t n = 40 + rng.below(21);
    auto g = random_feasible_linear_graph(rng, n, 4 * n, Rational(0), Rational(1));
    SurplusParams p;
    p.epsilon = Rational(1, 5);
    p.alpha = 0;
    p.beta = 1;
    p.seed = 5000 + static_cast<std::uint64_t>(t);
    p.n0 = 64;
    p.n1 = 256;
    auto a = preprocess_surplus(g, p);
    for (int k = 0; k < 500; ++k) {
      Vertex u = static_cast<Vertex>(rng.below(n)), v = static_cast<Vertex>(rng.below(n));
      Rational r = random_between(rng, 0, 1);
      auto z = query_surplus(a, u, v, r);
      auto delta = oracle::bellman_ford_distances(instantiate(g, r), u)[v];
      run.touches.check(z.touches <= 8, at_text("touches", u, v, r));
      lower.check(z.value >= delta, at_text("z < delta", u, v, r));
      if (z.value.is_finite()) {
        lower.check(evaluate(path_weight(g, surplus_path(a, g, u, v, z.path)), r) == z.value.value(),
                    at_text("path re-sum", u, v, r));
      }
      ++total;
      if (!delta.is_finite()) {
        ++unreachable;
        continue;
      }
      if (!z.value.is_finite() || z.value.value() > delta.value() + p.epsilon) ++over;
    }
  }
  double rate = static_cast<double>(over) / static_cast<double>(total);
  std::ostringstream os;
  os << total << " triples, z > delta + eps for " << over << " (" << 100 * rate << "%), " << unreachable
     << " unreachable";
  run.guarantee = lower.outcome(os.str());
  if (rate >= 0.01) {
    run.guarantee.pass = false;
    run.guarantee.detail += ", surplus rate not below 1%";
  }
  return run;
}

// 8. Byte-identical reruns and parse/serialize identity.
Outcome determinism_round_trip() {
  Tally tally;
  std::size_t linear = 0;
  for (const auto& c : corpus()) {
    if (!c.advice || linear++ >= 20) continue;
    auto text = serialize(*c.advice);
    tally.check(serialize(preprocess_linear(c.g)) == text, "linear rerun");
    auto back = parse_linear_advice(text);
    tally.check(back == *c.advice && serialize(back) == text, "linear round trip");
  }
  SplitMix64 rng(1008);
  for (int t = 0; t < 10; ++t) {
    auto g = random_poly_graph(rng, 1 + rng.below(6), rng.below(12), static_cast<int>(rng.below(3)));
    auto text = serialize(build_pair_oracle(g));
    tally.check(serialize(build_pair_oracle(g)) == text, "minbase rerun");
    tally.check(serialize(parse_minbase_advice(text)) == text, "minbase round trip");
  }
  for (int t = 0; t < 3; ++t) {
    auto g = random_feasible_linear_graph(rng, 20, 60, Rational(0), Rational(1));
    SurplusParams p;
    p.epsilon = Rational(1, 5);
    p.seed = 42 + static_cast<std::uint64_t>(t);
    p.n0 = 16;
    p.n1 = 32;
    auto a = preprocess_surplus(g, p);
    auto text = serialize(a);
    tally.check(serialize(preprocess_surplus(g, p)) == text, "surplus rerun");
    auto back = parse_surplus_advice(text);
    tally.check(back == a && serialize(back) == text, "surplus round trip");
  }
  return tally.outcome("linear, minbase and surplus advice");
}

// 9. Soft benchmark.
Outcome benchmark() {
  SplitMix64 rng(1009);
  auto g = random_feasible_linear_graph(rng, 500, 5000, Rational(0), Rational(1));
  auto a = preprocess_linear(g);
  auto [lo, hi] = finite_window(a.interval.alpha, a.interval.beta);
  auto trials = bench_trials(g.vertex_count(), 50, 1010, lo, hi);
  auto bf_before = stats::bellman_ford_call_count();
  LinearInstantiator fast(a, g);
  auto rep = run_bench(g, trials, [&](const BenchTrial& t) { return fast(t.source, t.r).index(); });
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << "n=500 m=5000, 50 trials: instantiate " << rep.fast_mean_us << " us, Bellman-Ford "
     << rep.scratch_mean_us << " us, speedup " << rep.speedup() << "x (target 3x)";
  bool only_scratch_calls = stats::bellman_ford_call_count() - bf_before == trials.size();
  if (!only_scratch_calls) os << ", instantiation ran Bellman-Ford";
  return {rep.speedup() >= 3 && only_scratch_calls, os.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  bool gating;
};

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  bool ok = true;
  auto report = [&](const Criterion& c, Outcome o, double seconds) {
    if (c.budget_s > 0 && seconds > c.budget_s) {
      o.pass = false;
      o.detail += ", over the time budget";
    }
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << seconds;
    const char* verdict = o.pass ? "PASS" : (c.gating ? "FAIL" : "FAIL (warning only)");
    std::cout << "criterion " << c.id << ' ' << verdict << ": " << c.name << ": " << o.detail << " [" << t.str()
              << " s]" << std::endl;
    if (c.gating && !o.pass) ok = false;
  };
  auto timed = [&](const Criterion& c, const std::function<Outcome()>& f) {
    auto start = clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    report(c, o, std::chrono::duration<double>(clock::now() - start).count());
  };
  auto seconds_since = [](clock::time_point s) { return std::chrono::duration<double>(clock::now() - s).count(); };

  auto corpus_start = clock::now();
  corpus();
  double corpus_s = seconds_since(corpus_start);

  timed({1, "linear pipeline equals Bellman-Ford", 30, true}, [&] {
    auto o = linear_equivalence();
    return o;
  });
  timed({2, "feasible interval equals brute force", 10, true}, feasibility_exactness);
  timed({3, "reweighted edges are nonnegative", 10, true}, reweight_nonnegative);

  auto mb_start = clock::now();
  MinBaseRun mb;
  try {
    mb = minbase_correctness();
  } catch (const std::exception& e) {
    mb.correctness = {false, std::string("threw: ") + e.what()};
  }
  double mb_s = seconds_since(mb_start);
  report({4, "minbase oracle equals brute force", 60, true}, mb.correctness, mb_s);

  timed({5, "envelope size bound", 5, true}, envelope_size);

  auto sp_start = clock::now();
  SurplusRun sp;
  try {
    sp = surplus_guarantee();
  } catch (const std::exception& e) {
    sp.guarantee = {false, std::string("threw: ") + e.what()};
  }
  double sp_s = seconds_since(sp_start);
  report({6, "surplus guarantee", 300, true}, sp.guarantee, sp_s);

  Outcome cost = mb.comparisons.outcome("minbase comparisons <= ceil(log2(t+2))+1");
  Outcome touches = sp.touches.outcome("surplus touches <= 8");
  report({7, "query cost", 0, true},
         {cost.pass && touches.pass && mb.comparisons.checks() > 0 && sp.touches.checks() > 0,
          cost.detail + "; " + touches.detail},
         0);

  timed({8, "determinism and advice round trip", 5, true}, determinism_round_trip);
  timed({9, "soft benchmark", 0, false}, benchmark);

  std::cout << "corpus setup " << corpus_s << " s; " << (ok ? "all gating criteria passed" : "gating criteria failed")
            << std::endl;
  return ok ? 0 : 1;
}
