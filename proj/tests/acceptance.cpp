// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "relic/relic.hpp"

using namespace relic;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// seed 1, 10 examples per class, 7 classes
const Dataset& reference(SynthMode mode = SynthMode::Full) {
  static std::map<SynthMode, Dataset> cache;
  auto it = cache.find(mode);
  if (it == cache.end()) {
    GeneratorConfig cfg;
    cfg.seed = 1;
    cfg.perClass = 10;
    cfg.mode = mode;
    it = cache.emplace(mode, generate_dataset(cfg)).first;
  }
  return it->second;
}

std::map<std::string, DlabTemplate> mono_biases(const Dataset& d, std::size_t events) {
  std::map<std::string, DlabTemplate> out;
  for (const auto& s : d.sources()) out.emplace(s, naive_bias(d.schema(), events, s));
  return out;
}

const MultisourceResult& reference_run() {
  static const MultisourceResult r = [] {
    const auto& d = reference();
    MultisourceParams params;
    return biased_multisource_learn(d, mono_biases(d, 4), parse_constraints("forbid_between ABP dias sys"), params);
  }();
  return r;
}

std::size_t deepest_bottom(const MultisourceResult& r, const PredicateSchema& schema) {
  std::size_t deepest = 1;
  for (const auto& [label, art] : r.artifacts)
    for (const auto& bt : art.bottoms) deepest = std::max(deepest, event_variables(bt.clause, schema).size());
  return deepest;
}

const Theory& naive_run() {
  static const Theory t = [] {
    const auto& d = reference();
    auto agg = aggregate(d.saturated());
    return learn_theory(agg.examples, d.classes(), naive_bias(d.schema(), deepest_bottom(reference_run(), d.schema())),
                        LearnerParams{});
  }();
  return t;
}

Outcome dlab_counting() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto four = parse_dlab("p(2-len:[el1,el2,el3])");
  o.require(count_space(four).value == 4 && enumerate(four, 10).size() == 4, "2-len over three elements is not 4");
  oracle::GrammarGen g(7);
  std::size_t checked = 0;
  for (int round = 0; checked < 250 && round < 10000; ++round) {
    std::string text = g.node(3);
    DlabTemplate t;
    try {
      t = parse_dlab(text);
    } catch (const BiasError&) {
      continue;
    }
    auto n = count_space(t);
    if (n.saturated || n.value > 10000) continue;
    ++checked;
    auto brute = oracle::brute_bodies(t, t.root()).size();
    auto listed = enumerate(t, 10000).size();
    o.require(brute == n.value && listed == n.value,
              text + ": count " + n.to_string() + ", enumerate " + std::to_string(listed) + ", brute " + std::to_string(brute));
  }
  double secs = seconds_since(t0);
  o.require(checked >= 200, "only " + std::to_string(checked) + " grammars");
  o.require(secs < 60, "took " + num(secs) + " s");
  if (o.ok) o.detail = std::to_string(checked) + " grammars in " + num(secs) + " s";
  return o;
}

Outcome coverage_oracle() {
  Outcome o;
  oracle::RandomLogic g(101);
  std::size_t n = 0, positive = 0;
  for (; n < 2000; ++n) {
    Clause c = g.clause(4);
    auto facts = g.facts(8);
    bool want = oracle::covers(c, facts);
    positive += want;
    o.require(covers(c, FactSet(facts)) == want, "disagrees on " + to_string(c));
  }
  auto doublet = parse_model_file(
                     "begin(model). doublet_3_I. p(p7,4905,normal). qrs(r7,5026,normal). suc(r7,p7). "
                     "qrs(r8,5638,abnormal). suc(r8,r7). qrs(r9,6448,abnormal). suc(r9,r8). end(model).")
                     .at(0);
  auto facts = saturate(doublet, SymbolizationConfig::cardiac()).facts;
  auto rule = parse_clause("class(doublet) :- qrs(X,abnormal), qrs(Y,abnormal), suc(Y,X).");
  auto s = covering_substitution(rule, facts);
  o.require(s && s->lookup(Term::variable("X"))->name() == "r8" && s->lookup(Term::variable("Y"))->name() == "r9",
            "doublet witness is not {X->r8, Y->r9}");
  if (o.ok) o.detail = std::to_string(n) + " instances (" + std::to_string(positive) + " covered), doublet witness ok";
  return o;
}

Outcome subsumption_oracle() {
  Outcome o;
  oracle::RandomLogic g(202);
  std::size_t n = 0, yes = 0;
  for (; n < 2000; ++n) {
    Clause c = g.clause(3), d = g.clause(4);
    bool want = oracle::subsumes(c, d);
    yes += want;
    o.require(theta_subsumes(c, d) == want, to_string(c) + " vs " + to_string(d));
  }
  std::size_t triples = 0;
  for (int i = 0; i < 3000; ++i) {
    Clause a = g.clause(2), b = g.clause(3), c = g.clause(4);
    o.require(theta_subsumes(a, a), "not reflexive on " + to_string(a));
    if (theta_subsumes(a, b) && theta_subsumes(b, c)) {
      ++triples;
      o.require(theta_subsumes(a, c), "not transitive on " + to_string(a));
    }
  }
  if (o.ok) o.detail = std::to_string(n) + " pairs (" + std::to_string(yes) + " subsumed), " + std::to_string(triples) + " chained triples";
  return o;
}

Outcome interleaving_count() {
  Outcome o;
  const auto schema = synth_schema(SynthMode::Full);
  auto chain = [](std::size_t n, const std::string& ev, const std::string& v) {
    Clause c{class_head("x"), {}};
    for (std::size_t i = 0; i < n; ++i) {
      auto var = v + std::to_string(i);
      c.body.push_back(parse_literal(ev + "(" + var + ",normal)"));
      if (i) c.body.push_back(parse_literal("suc(" + var + "," + v + std::to_string(i - 1) + ")"));
    }
    return c;
  };
  for (std::size_t n = 0; n <= 6; ++n)
    for (std::size_t p = 0; p <= 6; ++p) {
      std::uint64_t want = 1;
      for (std::size_t i = 1; i <= n; ++i) want = want * (p + i) / i;
      auto got = interleavings(chain(n, "qrs", "R"), chain(p, "sys", "S"), schema).size();
      o.require(got == want, "n=" + std::to_string(n) + " p=" + std::to_string(p) + ": " + std::to_string(got));
    }
  auto h1 = parse_clause("class(x) :- p(P0,normal), qrs(R0,normal), pr1(P0,R0,normal), suc(R0,P0).");
  auto h2 = parse_clause("class(x) :- dias(D0,normal), sys(S0,normal), suc(S0,D0).");
  auto ms = interleavings(h1, h2, schema);
  o.require(ms.size() == 6, "pair gives " + std::to_string(ms.size()) + " merges");
  auto kept = filter_constraints(ms, parse_constraints("forbid_between ABP dias sys"), h1, h2, schema);
  std::set<std::string> names;
  for (const auto& m : kept) names.insert(m.to_string());
  o.require(!names.count("P0,D0,R0,S0") && !names.count("D0,P0,S0,R0"), "constrained merges survive");
  o.require(names.count("P0,R0,D0,S0") && names.count("D0,S0,P0,R0"), "one-sided merges removed");
  if (o.ok) o.detail = "49 (n,p) pairs; 6 merges, " + std::to_string(kept.size()) + " after the pressure-cycle constraint";
  return o;
}

Outcome property1() {
  Outcome o;
  const auto& r = reference_run();
  auto sat = reference().saturated();
  std::size_t checks = 0, covered = 0;
  for (const auto& [src, theory] : r.mono)
    for (const auto& [label, ct] : theory.classes)
      for (const auto& h : ct.clauses)
        for (const auto& agg : r.aggregation.examples) {
          const auto* mono = sat.find(src, agg.situation);
          if (!mono) continue;
          ++checks;
          if (covers(h, mono->facts)) {
            ++covered;
            o.require(covers(h, agg.facts), to_string(h) + " loses situation " + std::to_string(agg.situation));
          }
        }
  o.require(checks >= 500, "only " + std::to_string(checks) + " checks");
  if (o.ok) o.detail = std::to_string(checks) + " checks, " + std::to_string(covered) + " monosource covers all preserved";
  return o;
}

Outcome property2() {
  Outcome o;
  const auto& d = reference();
  const auto& r = reference_run();
  const auto& naive = naive_run();
  auto sat = d.saturated();
  double slowest = 0;
  for (const auto& label : d.classes()) {
    double best = 0;
    for (const auto& src : d.sources()) {
      const auto& ct = r.mono.at(src).classes.at(label);
      double tr = theory_accuracy(ct.clauses, label, sat.examples(src));
      best = std::max(best, tr);
      o.require(tr == 1.0, "monosource " + src + " TrAcc " + num(tr) + " on " + label);
      slowest = std::max(slowest, ct.stats.timeMs);
    }
    const auto& fin = r.theory.classes.at(label);
    double tr = theory_accuracy(fin.clauses, label, r.aggregation.examples);
    o.require(tr >= best, label + ": biased " + num(tr) + " < monosource " + num(best));
    o.require(tr == 1.0, "biased TrAcc " + num(tr) + " on " + label);
    const auto& nv = naive.classes.at(label);
    double ntr = theory_accuracy(nv.clauses, label, r.aggregation.examples);
    o.require(ntr == 1.0, "naive TrAcc " + num(ntr) + " on " + label);
    slowest = std::max({slowest, fin.stats.timeMs, nv.stats.timeMs});
  }
  o.require(slowest < 60000, "a class took " + num(slowest / 1000) + " s");
  if (o.ok) o.detail = "7 classes at TrAcc 1.0 for all learners; slowest class " + num(slowest) + " ms";
  return o;
}

Outcome property3() {
  Outcome o;
  const auto& d = reference();
  const auto& r = reference_run();
  auto depth = deepest_bottom(r, d.schema());
  auto naive_size = count_space(naive_bias(d.schema(), depth));
  for (const auto& [label, art] : r.artifacts) {
    o.require(art.bias.has_value(), label + " has no synthesized bias");
    if (art.bias) o.require(count_space(*art.bias) < naive_size, label + ": synthesized space is not smaller");
  }
  auto biased = r.theory.total_stats().nodes;
  auto naive = naive_run().total_stats().nodes;
  double ratio = biased ? static_cast<double>(naive) / static_cast<double>(biased) : 0;
  o.require(biased * 5 <= naive, "nodes: biased " + std::to_string(biased) + ", naive " + std::to_string(naive));
  if (o.ok)
    o.detail = "naive space " + naive_size.to_string() + " (" + std::to_string(depth) + " events); nodes biased " +
               std::to_string(biased) + " vs naive " + std::to_string(naive) + " (" + num(ratio) + "x)";
  return o;
}

// Event sources of a clause, and whether some suci joins events of different sources.
std::pair<std::set<std::string>, bool> composition(const Clause& c, const PredicateSchema& schema) {
  std::map<std::string, std::string> var_source;
  std::set<std::string> sources;
  for (const auto& l : c.body)
    if (schema.is_event(l)) {
      sources.insert(*schema.source_of(l));
      var_source[l.args[0].name()] = *schema.source_of(l);
    }
  bool joined = false;
  for (const auto& l : c.body)
    if (l.predicate.name() == "suci") {
      auto a = var_source.find(l.args[0].name()), b = var_source.find(l.args[1].name());
      if (a != var_source.end() && b != var_source.end() && a->second != b->second) joined = true;
    }
  return {sources, joined};
}

Outcome source_behavior() {
  Outcome o;
  MultisourceParams split_params;
  split_params.mono.maxFpFraction = 0.2;
  const auto& split = reference(SynthMode::Split);
  auto rs = biased_multisource_learn(split, mono_biases(split, 4), {}, split_params);
  std::set<std::string> composite;
  for (const auto& [label, ct] : rs.theory.classes)
    for (const auto& c : ct.clauses) {
      auto [srcs, joined] = composition(c, split.schema());
      if (srcs.size() == 2 && joined) composite.insert(label);
    }
  o.require(!composite.empty(), "split mode learned no composite clause");

  const auto& red = reference(SynthMode::Redundant);
  auto rr = biased_multisource_learn(red, mono_biases(red, 4), {}, MultisourceParams{});
  std::size_t clauses = 0;
  for (const auto& [label, ct] : rr.theory.classes)
    for (const auto& c : ct.clauses) {
      ++clauses;
      o.require(composition(c, red.schema()).first.size() == 1, "redundant mode mixes sources: " + to_string(c));
    }
  if (o.ok) {
    std::string names;
    for (const auto& l : composite) names += (names.empty() ? "" : ",") + l;
    o.detail = "composite classes in split mode: " + names + "; " + std::to_string(clauses) + " single-source clauses in redundant mode";
  }
  return o;
}

Outcome crossval_harness() {
  Outcome o;
  PredicateSchema s;
  s.add({"suc", 2, PredicateRole::GlobalRelational, kSharedSource, {}});
  s.add({"suci", 2, PredicateRole::GlobalRelational, kSharedSource, {}});
  s.add({"qrs", 2, PredicateRole::Event, "I", {{1, {"normal", "abnormal"}}}});
  Dataset d(s, SymbolizationConfig{}, {"a", "b"});
  auto add = [&](int k, const std::string& label, const std::vector<std::string>& shapes) {
    Interpretation i;
    i.situation = k;
    i.source = "I";
    i.label = label;
    for (std::size_t n = 0; n < shapes.size(); ++n)
      i.raw_events.push_back({"r" + std::to_string(n + 1), "qrs", 1000 + 800 * static_cast<std::int64_t>(n), {shapes[n]}});
    d.add(i);
  };
  add(1, "a", {"abnormal"});
  add(2, "a", {"abnormal", "normal"});
  add(3, "b", {"normal"});
  add(4, "b", {"normal", "normal"});
  EvalSetup setup;
  setup.biasPerSource.emplace("I", parse_dlab("0-len:[qrs(X,1-1:[normal,abnormal])]"));
  auto rep = cross_validate(d, EvalMode::parse("mono:I"), setup, 4);
  // by hand: a is always qrs(X,abnormal) and exact; b only learns qrs(X,normal) when
  // situation 2 is held out, which then misfires on it
  std::map<std::string, double> acc;
  for (const auto& row : rep.rows) acc[row.label] = row.acc;
  o.require(acc["a"] == 1.0 && acc["b"] == 0.25, "LOO Acc a " + num(acc["a"]) + ", b " + num(acc["b"]));

  GeneratorConfig cfg;
  cfg.seed = 1;
  cfg.perClass = 4;
  auto data = generate_dataset(cfg);
  EvalSetup biased;
  biased.biasPerSource = mono_biases(data, 3);
  biased.constraints = parse_constraints("forbid_between ABP dias sys");
  std::size_t runs = 0;
  for (std::size_t p : {2u, 4u, 7u}) {
    auto r = cross_validate(data, EvalMode::parse("biased"), biased, p);
    ++runs;
    o.require(r.foldAlignment, "fold alignment broken with " + std::to_string(p) + " folds");
  }
  if (o.ok) o.detail = "LOO Acc a 1.000, b 0.250 as computed by hand; alignment held in " + std::to_string(runs) + " biased runs";
  return o;
}

Outcome metric() {
  Outcome o;
  o.require(accuracy(3, 4, 2, 1) == 0.7, "accuracy(3,4,2,1) = " + std::to_string(accuracy(3, 4, 2, 1)));
  if (o.ok) o.detail = "accuracy(3,4,2,1) = 0.7";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"dlab-counting-oracle", dlab_counting},
      {"coverage-oracle", coverage_oracle},
      {"theta-subsumption-oracle", subsumption_oracle},
      {"interleaving-count", interleaving_count},
      {"coverage-preserved-by-aggregation", property1},
      {"training-accuracy-not-below-monosource", property2},
      {"search-space-reduction", property3},
      {"complementary-and-redundant-sources", source_behavior},
      {"cross-validation-harness", crossval_harness},
      {"accuracy-metric", metric},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << num(seconds_since(t0)) << " s]"
              << std::endl;
  }
  return failed ? 1 : 0;
}
