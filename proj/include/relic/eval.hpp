#pragma once

#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "relic/dataset.hpp"
#include "relic/error.hpp"
#include "relic/learner.hpp"
#include "relic/multisource.hpp"

namespace relic {

// Test sets T_1..T_p over situation ids: sorted ids dealt round-robin, so the
// first n mod p folds hold one extra situation.
struct FoldPlan {
  std::vector<std::vector<int>> tests;

  static FoldPlan make(const std::vector<int>& situations, std::size_t p) {
    if (p < 2 || p > situations.size())
      throw UsageError("fold count " + std::to_string(p) + " outside [2, " + std::to_string(situations.size()) + "]");
    std::vector<int> ids = situations;
    std::sort(ids.begin(), ids.end());
    FoldPlan plan;
    plan.tests.resize(p);
    for (std::size_t i = 0; i < ids.size(); ++i) plan.tests[i % p].push_back(ids[i]);
    return plan;
  }
  std::size_t size() const noexcept { return tests.size(); }
};

struct EvalMode {
  enum Kind { Mono, Naive, Biased } kind = Biased;
  std::string source;  // for Mono

  static EvalMode parse(const std::string& s) {
    if (s == "naive") return {Naive, ""};
    if (s == "biased") return {Biased, ""};
    if (s.rfind("mono:", 0) == 0 && s.size() > 5) return {Mono, s.substr(5)};
    throw UsageError("unknown evaluation mode '" + s + "' (mono:<source>, naive, biased)");
  }
  std::string to_string() const {
    switch (kind) {
      case Mono: return "mono:" + source;
      case Naive: return "naive";
      case Biased: return "biased";
    }
    return "?";
  }
};

struct EvalSetup {
  std::map<std::string, DlabTemplate> biasPerSource;  // mono and biased modes
  std::size_t naiveMaxEvents = 4;
  std::vector<InterleavingConstraint> constraints;
  MultisourceParams params;  // `final` drives mono and naive runs too
};

struct ReportRow {
  std::string label;
  double nodes = 0;   // mean refinements per fold
  double timeMs = 0;  // mean per fold; biased mode adds the class's monosource time
  double trAcc = 0;
  double acc = 0;
  std::string comp;  // event literals per clause, first fold's theory
  std::size_t folds = 0;
};

struct EvaluationReport {
  std::string mode;
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  std::vector<ReportRow> rows;
  bool foldAlignment = true;
  std::vector<std::string> notes;
};

// Slash-separated event-literal counts, "0" for an empty theory.
inline std::string comp_metric(const std::vector<Clause>& theory, const PredicateSchema& schema) {
  if (theory.empty()) return "0";
  std::string out;
  for (const auto& c : theory) {
    std::size_t n = 0;
    for (const auto& l : c.body) n += schema.is_event(l);
    out += (out.empty() ? "" : "/") + std::to_string(n);
  }
  return out;
}

namespace detail {

inline double test_score(const std::vector<Clause>& theory, const std::string& label,
                         const std::vector<const Interpretation*>& tests) {
  std::size_t ok = 0;
  for (auto* e : tests) {
    bool covered = theory_covers(theory, e->facts);
    ok += e->label == label ? covered : !covered;
  }
  return static_cast<double>(ok) / static_cast<double>(tests.size());
}

inline std::set<int> ids_of(const std::vector<Interpretation>& xs) {
  std::set<int> out;
  for (const auto& x : xs) out.insert(x.situation);
  return out;
}

}  // namespace detail

inline EvaluationReport cross_validate(const Dataset& data, const EvalMode& mode, const EvalSetup& setup,
                                       std::size_t p) {
  Dataset sat = data.saturated();
  auto plan = FoldPlan::make(sat.situations(), p);
  EvaluationReport rep;
  rep.mode = mode.to_string();
  rep.folds = p;

  std::vector<Interpretation> pool;  // examples scored in this mode
  std::optional<DlabTemplate> naive;
  if (mode.kind == EvalMode::Mono) {
    if (!setup.biasPerSource.count(mode.source)) throw UsageError("no bias given for source " + mode.source);
    pool = sat.examples(mode.source);
    if (pool.empty()) throw UsageError("no examples for source " + mode.source);
  } else {
    pool = aggregate(sat).examples;
    if (mode.kind == EvalMode::Naive) naive = naive_bias(sat.schema(), setup.naiveMaxEvents);
  }

  struct Acc {
    double nodes = 0, time = 0, tr = 0, te = 0;
    std::size_t folds = 0, tested = 0;
    std::string comp;
    bool comp_set = false;
  };
  std::map<std::string, Acc> acc;

  for (std::size_t f = 0; f < plan.size(); ++f) {
    std::set<int> test_ids(plan.tests[f].begin(), plan.tests[f].end());
    std::set<int> train_ids;
    for (int k : sat.situations())
      if (!test_ids.count(k)) train_ids.insert(k);
    std::vector<Interpretation> train;
    std::vector<const Interpretation*> test;
    for (const auto& e : pool) {
      if (test_ids.count(e.situation)) test.push_back(&e);
      else train.push_back(e);
    }
    std::set<std::string> train_labels;
    for (const auto& e : train) train_labels.insert(e.label);

    Theory theory;
    std::map<std::string, double> extra_time;
    if (mode.kind == EvalMode::Biased) {
      Dataset fold_train = sat.subset(train_ids);
      auto r = biased_multisource_learn(fold_train, setup.biasPerSource, setup.constraints, setup.params);
      theory = r.theory;
      for (const auto& [src, t] : r.mono)
        for (const auto& [label, ct] : t.classes) extra_time[label] += ct.stats.timeMs;
      // the same situations are held out of every source and of the aggregate
      auto held_out = [&](const std::vector<Interpretation>& all, const std::vector<Interpretation>& kept) {
        auto held = detail::ids_of(all);
        for (int k : detail::ids_of(kept)) held.erase(k);
        std::set<int> expect;
        for (int k : detail::ids_of(all))
          if (test_ids.count(k)) expect.insert(k);
        return held == expect;
      };
      for (const auto& s : sat.sources())
        rep.foldAlignment = rep.foldAlignment && held_out(sat.examples(s), fold_train.examples(s));
      rep.foldAlignment = rep.foldAlignment && held_out(pool, r.aggregation.examples);
      for (const auto& w : r.warnings) rep.notes.push_back("fold " + std::to_string(f + 1) + ": " + w);
    } else {
      const DlabTemplate& bias = mode.kind == EvalMode::Naive ? *naive : setup.biasPerSource.at(mode.source);
      for (const auto& label : sat.classes()) {
        if (!train_labels.count(label)) continue;
        theory.classes[label] = learn_class(label, train, bias, setup.params.final);
      }
    }

    for (const auto& label : sat.classes()) {
      auto it = theory.classes.find(label);
      if (it == theory.classes.end() || !train_labels.count(label)) {
        rep.notes.push_back("fold " + std::to_string(f + 1) + ": class " + label + " skipped (no training rule or positives)");
        continue;
      }
      auto& a = acc[label];
      a.nodes += static_cast<double>(it->second.stats.nodes);
      a.time += it->second.stats.timeMs + extra_time[label];
      a.tr += theory_accuracy(it->second.clauses, label, train);
      if (!test.empty()) {
        a.te += detail::test_score(it->second.clauses, label, test);
        ++a.tested;
      }
      ++a.folds;
      if (!a.comp_set) {
        a.comp = comp_metric(it->second.clauses, sat.schema());
        a.comp_set = true;
      }
    }
  }

  for (const auto& label : sat.classes()) {
    auto it = acc.find(label);
    if (it == acc.end() || it->second.folds == 0) continue;
    const auto& a = it->second;
    double n = static_cast<double>(a.folds);
    rep.rows.push_back({label, a.nodes / n, a.time / n, a.tr / n, a.tested ? a.te / static_cast<double>(a.tested) : 0.0, a.comp, a.folds});
  }
  return rep;
}

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace detail

// One row per class: Nodes, TimeMs, TrAcc, Acc, Comp. Rates carry 3 decimals.
inline std::string emit_report(const EvaluationReport& r, const std::string& format) {
  using detail::fixed;
  auto cells = [](const ReportRow& row) {
    return std::vector<std::string>{row.label, fixed(row.nodes, 1), fixed(row.timeMs, 1), fixed(row.trAcc, 3),
                                    fixed(row.acc, 3), row.comp};
  };
  const std::vector<std::string> header{"class", "Nodes", "TimeMs", "TrAcc", "Acc", "Comp"};
  std::string note = "mode " + r.mode + ", " + std::to_string(r.folds) + " folds; Comp = event literals per clause";
  std::string out;
  if (format == "csv") {
    out += "# " + note + "\n";
    auto line = [&](const std::vector<std::string>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
      out += "\n";
    };
    line(header);
    for (const auto& row : r.rows) line(cells(row));
  } else if (format == "markdown") {
    out += "<!-- " + note + " -->\n";
    auto line = [&](const std::vector<std::string>& v) {
      out += "|";
      for (const auto& c : v) out += " " + c + " |";
      out += "\n";
    };
    line(header);
    out += "|---|---:|---:|---:|---:|---|\n";
    for (const auto& row : r.rows) line(cells(row));
  } else {
    throw UsageError("unknown report format '" + format + "' (csv, markdown)");
  }
  return out;
}

}  // namespace relic
