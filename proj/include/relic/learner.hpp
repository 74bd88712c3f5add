#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "relic/clause.hpp"
#include "relic/coverage.hpp"
#include "relic/dlab.hpp"
#include "relic/error.hpp"
#include "relic/model_io.hpp"
#include "relic/parallel.hpp"

namespace relic {

struct LearnerParams {
  std::size_t beamWidth = 10;
  std::size_t maxClausesPerClass = 8;
  std::size_t minPositiveCoverage = 1;
  // Accept a clause covering at most floor(maxFpFraction * |neg|) negatives.
  double maxFpFraction = 0.0;

  void validate() const {
    if (beamWidth < 1) throw UsageError("beam width must be at least 1");
    if (maxClausesPerClass < 1) throw UsageError("max clauses per class must be at least 1");
    if (minPositiveCoverage < 1) throw UsageError("min positive coverage must be at least 1");
    if (!(maxFpFraction >= 0.0 && maxFpFraction < 1.0))
      throw UsageError("max false-positive fraction must lie in [0, 1)");
  }
};

struct SearchStats {
  std::uint64_t nodes = 0;  // refine outputs generated, scored or pruned
  double timeMs = 0;

  SearchStats& operator+=(const SearchStats& o) {
    nodes += o.nodes;
    timeMs += o.timeMs;
    return *this;
  }
};

struct ClassTheory {
  std::vector<Clause> clauses;
  SearchStats stats;
  bool incomplete = false;  // some positives left uncovered
};

struct Theory {
  std::map<std::string, ClassTheory> classes;

  const std::vector<Clause>& clauses(const std::string& label) const {
    static const std::vector<Clause> none;
    auto it = classes.find(label);
    return it == classes.end() ? none : it->second.clauses;
  }
  SearchStats total_stats() const {
    SearchStats s;
    for (const auto& [c, t] : classes) s += t.stats;
    return s;
  }
};

inline std::string to_string(const Theory& t) {
  std::string out;
  for (const auto& [label, ct] : t.classes) {
    out += "% class " + label + ": " + std::to_string(ct.clauses.size()) + " clause(s), " +
           std::to_string(ct.stats.nodes) + " nodes" + (ct.incomplete ? ", incomplete" : "") + "\n";
    for (const auto& c : ct.clauses) out += to_string(c) + "\n";
  }
  return out;
}

// (TP + TN) / (TP + TN + FP + FN)
inline double accuracy(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
  std::size_t total = tp + tn + fp + fn;
  if (total == 0) throw UsageError("accuracy of an empty confusion matrix");
  return static_cast<double>(tp + tn) / static_cast<double>(total);
}

struct ClauseScore {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  double accuracy = 0;
};

inline ClauseScore score_clause(const Clause& c, const std::vector<const FactSet*>& pos,
                                const std::vector<const FactSet*>& neg) {
  CoverageTest test(c);
  ClauseScore s;
  for (auto* f : pos) s.tp += test(*f);
  for (auto* f : neg) s.fp += test(*f);
  s.fn = pos.size() - s.tp;
  s.tn = neg.size() - s.fp;
  s.accuracy = accuracy(s.tp, s.tn, s.fp, s.fn);
  return s;
}

// Accuracy of a disjunctive class theory over labelled examples.
inline double theory_accuracy(const std::vector<Clause>& theory, const std::string& label,
                              const std::vector<Interpretation>& examples) {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (const auto& e : examples) {
    bool covered = theory_covers(theory, e.facts);
    bool positive = e.label == label;
    if (positive) (covered ? tp : fn)++;
    else (covered ? fp : tn)++;
  }
  return accuracy(tp, tn, fp, fn);
}

// Called with each batch of refinements as it is generated.
using RefineHook = std::function<void(const Selection& parent, const std::vector<Selection>& children)>;

namespace detail {

struct SearchNode {
  Selection sel;
  Clause clause;
  std::string text;
  std::vector<std::uint32_t> pos;  // covered positive indexes
  std::vector<std::uint32_t> neg;  // covered negative indexes
  double acc = 0;
};

// Better first: higher accuracy, then canonical text.
inline bool node_better(const SearchNode& a, const SearchNode& b) {
  if (a.acc != b.acc) return a.acc > b.acc;
  return a.text < b.text;
}

}  // namespace detail

// Covering loop of beam searches for one class.
inline ClassTheory learn_class(const std::string& label, const std::vector<Interpretation>& examples,
                               const DlabTemplate& bias, const LearnerParams& params,
                               const RefineHook& hook = nullptr) {
  params.validate();
  auto start = std::chrono::steady_clock::now();
  std::vector<const FactSet*> pos_all, neg;
  for (const auto& e : examples) (e.label == label ? pos_all : neg).push_back(&e.facts);
  if (pos_all.empty()) throw UsageError("class '" + label + "' has no positive examples");

  const auto fp_budget = static_cast<std::size_t>(std::floor(params.maxFpFraction * static_cast<double>(neg.size())));
  const Literal head = class_head(label);
  ClassTheory out;
  std::vector<const FactSet*> pos = pos_all;

  auto evaluate = [&](detail::SearchNode& n, const detail::SearchNode* parent) {
    CoverageTest test(n.clause);
    if (parent) {
      for (auto i : parent->pos)
        if (test(*pos[i])) n.pos.push_back(i);
      for (auto i : parent->neg)
        if (test(*neg[i])) n.neg.push_back(i);
    } else {
      for (std::uint32_t i = 0; i < pos.size(); ++i)
        if (test(*pos[i])) n.pos.push_back(i);
      for (std::uint32_t i = 0; i < neg.size(); ++i)
        if (test(*neg[i])) n.neg.push_back(i);
    }
    std::size_t tp = n.pos.size(), fp = n.neg.size();
    n.acc = accuracy(tp, neg.size() - fp, fp, pos.size() - tp);
  };
  auto acceptable = [&](const detail::SearchNode& n) {
    return n.neg.size() <= fp_budget && n.pos.size() >= params.minPositiveCoverage;
  };

  while (!pos.empty() && out.clauses.size() < params.maxClausesPerClass) {
    detail::SearchNode root;
    root.sel = bias.root_selection();
    root.clause = Clause{head, {}};
    root.text = canonical_text(root.clause);
    evaluate(root, nullptr);

    std::vector<detail::SearchNode> beam{std::move(root)};
    std::optional<detail::SearchNode> accepted;
    while (!beam.empty() && !accepted) {
      // expand
      std::vector<std::pair<std::size_t, Selection>> children;
      for (std::size_t b = 0; b < beam.size(); ++b) {
        auto kids = bias.refine(beam[b].sel);
        if (hook) hook(beam[b].sel, kids);
        out.stats.nodes += kids.size();
        for (auto& k : kids) children.emplace_back(b, std::move(k));
      }
      std::vector<detail::SearchNode> cands(children.size());
      parallel_for(children.size(), [&](std::size_t i) {
        auto& n = cands[i];
        n.sel = std::move(children[i].second);
        n.clause = Clause{head, bias.body(n.sel)};
        n.text = canonical_text(n.clause);
        evaluate(n, &beam[children[i].first]);
      });

      // keep one node per clause text, drop those below minimum coverage
      std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
        if (a.text != b.text) return a.text < b.text;
        return a.sel < b.sel;
      });
      std::vector<detail::SearchNode> next;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        if (i > 0 && cands[i].text == cands[i - 1].text) continue;
        if (cands[i].pos.size() < params.minPositiveCoverage) continue;
        next.push_back(std::move(cands[i]));
      }
      std::sort(next.begin(), next.end(), detail::node_better);
      for (auto& n : next)
        if (acceptable(n)) {
          accepted = std::move(n);
          break;
        }
      if (next.size() > params.beamWidth) next.resize(params.beamWidth);
      beam = std::move(next);
    }
    if (!accepted) break;

    std::vector<char> gone(pos.size(), 0);
    for (auto i : accepted->pos) gone[i] = 1;
    std::vector<const FactSet*> rest;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if (!gone[i]) rest.push_back(pos[i]);
    pos = std::move(rest);
    out.clauses.push_back(std::move(accepted->clause));
  }
  out.incomplete = !pos.empty();
  out.stats.timeMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// One bias for every class, or a per-class lookup.
using BiasFor = std::function<const DlabTemplate&(const std::string& label)>;

inline Theory learn_theory(const std::vector<Interpretation>& examples, const std::vector<std::string>& classes,
                           const BiasFor& bias, const LearnerParams& params) {
  std::set<std::string> present;
  for (const auto& e : examples) present.insert(e.label);
  if (present.size() < 2) throw UsageError("learning needs examples of at least two classes");
  Theory t;
  for (const auto& label : classes) {
    if (!present.count(label)) continue;
    t.classes[label] = learn_class(label, examples, bias(label), params);
  }
  return t;
}

inline Theory learn_theory(const std::vector<Interpretation>& examples, const std::vector<std::string>& classes,
                           const DlabTemplate& bias, const LearnerParams& params) {
  return learn_theory(examples, classes, [&](const std::string&) -> const DlabTemplate& { return bias; }, params);
}

}  // namespace relic
