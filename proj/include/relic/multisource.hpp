#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "relic/clause.hpp"
#include "relic/coverage.hpp"
#include "relic/dataset.hpp"
#include "relic/dlab.hpp"
#include "relic/error.hpp"
#include "relic/learner.hpp"
#include "relic/parallel.hpp"
#include "relic/saturate.hpp"
#include "relic/schema.hpp"

namespace relic {

// ---------------------------------------------------------------------------
// Aggregation

struct DroppedSituation {
  int situation = 0;
  std::string reason;  // "inconsistent" or "incomplete"
};

struct Aggregation {
  std::vector<Interpretation> examples;  // one per surviving situation, source "A+B"
  std::vector<DroppedSituation> dropped;
};

// Unions the saturated per-source facts of each situation and links events
// of different sources on the merged timeline: suc within the window, suci
// for adjacent events. Source-local facts are kept as saturated per source.
inline Aggregation aggregate(const Dataset& data) {
  auto sources = data.sources();
  if (sources.size() < 2) throw UsageError("aggregation needs at least two sources");
  std::string tag;
  for (const auto& s : sources) tag += (tag.empty() ? "" : "+") + s;
  const auto& cfg = data.config();

  Aggregation out;
  for (int k : data.situations()) {
    std::vector<const Interpretation*> parts;
    for (const auto& s : sources)
      if (auto* i = data.find(s, k)) parts.push_back(i);
    if (parts.size() != sources.size()) {
      out.dropped.push_back({k, "incomplete"});
      continue;
    }
    bool consistent = true;
    for (std::size_t i = 1; i < parts.size(); ++i) consistent = consistent && check_consistency(*parts[0], *parts[i]);
    if (!consistent) {
      out.dropped.push_back({k, "inconsistent"});
      continue;
    }

    Interpretation merged;
    merged.situation = k;
    merged.source = tag;
    merged.label = parts[0]->label;
    std::map<std::string, std::size_t> origin;
    FactSet facts;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      auto sat = saturate(*parts[i], cfg);
      facts = facts.united(sat.facts);
      for (const auto& e : parts[i]->raw_events) {
        if (!origin.emplace(e.id, i).second)
          throw UsageError("event id '" + e.id + "' occurs in two sources of situation " + std::to_string(k));
        merged.raw_events.push_back(e);
      }
    }
    std::stable_sort(merged.raw_events.begin(), merged.raw_events.end(), timeline_less);
    std::vector<Literal> cross;
    detail::succession_facts(merged.raw_events, cfg.suc_window,
                             [&](const RawEvent& a, const RawEvent& b) { return origin[a.id] != origin[b.id]; },
                             cross);
    merged.facts = facts.united(FactSet(std::move(cross)));
    out.examples.push_back(std::move(merged));
  }
  if (out.examples.empty()) throw UsageError("no situation survives aggregation");
  return out;
}

// ---------------------------------------------------------------------------
// Interleavings

struct MergeSlot {
  Term var;
  Symbol predicate;
  int origin = 0;  // 0: first hypothesis, 1: second
};

struct Merge {
  std::vector<MergeSlot> slots;

  std::string to_string() const {
    std::string out;
    for (const auto& s : slots) out += (out.empty() ? "" : ",") + s.var.name();
    return out;
  }
};

struct InterleavingConstraint {
  std::string source;
  std::string before;
  std::string after;
};

// `forbid_between <source> <before> <after>` per line; `%` and `#` start comments.
inline std::vector<InterleavingConstraint> parse_constraints(const std::string& text) {
  std::vector<InterleavingConstraint> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto cut = line.find_first_of("%#");
    if (cut != std::string::npos) line.resize(cut);
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string x; words >> x;) w.push_back(x);
    if (w.empty()) continue;
    if (w.size() != 4 || w[0] != "forbid_between")
      throw ParseError("expected 'forbid_between <source> <before> <after>'", n);
    out.push_back({w[1], w[2], w[3]});
  }
  return out;
}

// Event literals of a hypothesis in the order given by its suc/suci chain.
// Throws when the chain does not order all events totally.
inline std::vector<std::pair<Term, Symbol>> event_order(const Clause& h, const PredicateSchema& schema,
                                                        const std::string& name = "hypothesis") {
  std::vector<std::pair<Term, Symbol>> events;
  for (const auto& l : h.body)
    if (schema.is_event(l) && !l.args.empty()) {
      bool seen = std::any_of(events.begin(), events.end(), [&](const auto& e) { return e.first == l.args[0]; });
      if (!seen) events.emplace_back(l.args[0], l.predicate);
    }
  std::size_t n = events.size();
  auto index = [&](const Term& t) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < n; ++i)
      if (events[i].first == t) return i;
    return std::nullopt;
  };
  // after[i][j]: event i comes after event j
  std::vector<std::vector<char>> after(n, std::vector<char>(n, 0));
  for (const auto& l : h.body) {
    auto p = l.predicate.name();
    if ((p != "suc" && p != "suci") || l.args.size() != 2) continue;
    auto a = index(l.args[0]), b = index(l.args[1]);
    if (a && b) after[*a][*b] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (after[i][k] && after[k][j]) after[i][j] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (after[i][i]) throw UsageError(name + ": cyclic event order in " + to_string(h));
    for (std::size_t j = i + 1; j < n; ++j)
      if (!after[i][j] && !after[j][i])
        throw UsageError(name + ": events " + events[i].first.name() + " and " + events[j].first.name() +
                         " are not ordered in " + to_string(h));
  }
  std::vector<std::size_t> rank(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rank[i] += after[i][j];
  std::vector<std::pair<Term, Symbol>> ordered(n);
  for (std::size_t i = 0; i < n; ++i) ordered[rank[i]] = events[i];
  return ordered;
}

// All C(n+p, n) order-preserving merges of the two event sequences; merges
// placing the first hypothesis' event earlier come first.
inline std::vector<Merge> interleavings(const Clause& h1, const Clause& h2, const PredicateSchema& schema) {
  auto a = event_order(h1, schema, "first hypothesis");
  auto b = event_order(h2, schema, "second hypothesis");
  std::vector<Merge> out;
  Merge cur;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
    if (i == a.size() && j == b.size()) {
      out.push_back(cur);
      return;
    }
    if (i < a.size()) {
      cur.slots.push_back({a[i].first, a[i].second, 0});
      rec(i + 1, j);
      cur.slots.pop_back();
    }
    if (j < b.size()) {
      cur.slots.push_back({b[j].first, b[j].second, 1});
      rec(i, j + 1);
      cur.slots.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

namespace detail {

inline std::optional<std::string> hypothesis_source(const Clause& h, const PredicateSchema& schema) {
  for (const auto& l : h.body)
    if (schema.is_event(l)) return schema.source_of(l);
  return std::nullopt;
}

// Does the merge put an event of another hypothesis between `before` and the
// next `after` event of hypothesis `origin`, where those two are adjacent?
inline bool violates(const Merge& m, int origin, const InterleavingConstraint& c) {
  std::optional<std::size_t> last_own;
  for (std::size_t i = 0; i < m.slots.size(); ++i) {
    if (m.slots[i].origin != origin) continue;
    if (last_own && m.slots[*last_own].predicate.name() == c.before && m.slots[i].predicate.name() == c.after &&
        i - *last_own > 1)
      return true;
    last_own = i;
  }
  return false;
}

}  // namespace detail

inline std::vector<Merge> filter_constraints(const std::vector<Merge>& merges,
                                             const std::vector<InterleavingConstraint>& constraints,
                                             const Clause& h1, const Clause& h2, const PredicateSchema& schema) {
  auto s1 = detail::hypothesis_source(h1, schema);
  auto s2 = detail::hypothesis_source(h2, schema);
  std::vector<Merge> out;
  for (const auto& m : merges) {
    bool ok = true;
    for (const auto& c : constraints) {
      if (s1 && *s1 == c.source && detail::violates(m, 0, c)) ok = false;
      if (s2 && *s2 == c.source && detail::violates(m, 1, c)) ok = false;
    }
    if (ok) out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bottom clauses

struct BottomClause {
  Clause clause;
  Merge merge;
};

inline Literal suci_literal(const Term& later, const Term& earlier) { return Literal("suci", {later, earlier}); }

// Both bodies plus suci(X, Y) for each pair Y, X adjacent in the merge and
// coming from different hypotheses.
inline BottomClause make_bottom_clause(const Clause& h1, const Clause& h2, const Merge& m) {
  BottomClause b;
  b.merge = m;
  b.clause.head = h1.body.empty() && !h2.body.empty() ? h2.head : h1.head;
  b.clause.body = h1.body;
  b.clause.body.insert(b.clause.body.end(), h2.body.begin(), h2.body.end());
  for (std::size_t i = 1; i < m.slots.size(); ++i)
    if (m.slots[i].origin != m.slots[i - 1].origin)
      b.clause.body.push_back(suci_literal(m.slots[i].var, m.slots[i - 1].var));
  return b;
}

// ---------------------------------------------------------------------------
// Bias synthesis

namespace detail {

// One block: the space of clauses more general than `b`, following its merge.
inline DlabExpr bottom_block(const BottomClause& b, const PredicateSchema& schema) {
  const auto& slots = b.merge.slots;
  std::size_t m = slots.size();
  auto position = [&](const Term& t) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < m; ++i)
      if (slots[i].var == t) return i;
    return std::nullopt;
  };

  std::vector<std::optional<Literal>> event_lit(m);
  std::vector<char> used(b.clause.body.size(), 0);
  for (std::size_t k = 0; k < b.clause.body.size(); ++k) {
    const auto& l = b.clause.body[k];
    if (!schema.is_event(l) || l.args.empty()) continue;
    if (auto p = position(l.args[0]); p && !event_lit[*p]) {
      event_lit[*p] = l;
      used[k] = 1;
    }
  }

  // connector of event j: cross suci when the predecessor comes from the other
  // hypothesis, else the own suc/suci literal to the latest earlier event
  std::vector<std::optional<Literal>> conn(m);
  for (std::size_t j = 1; j < m; ++j) {
    std::optional<std::size_t> best_k;
    std::size_t best_pos = 0;
    bool cross = slots[j].origin != slots[j - 1].origin;
    for (std::size_t k = 0; k < b.clause.body.size(); ++k) {
      const auto& l = b.clause.body[k];
      if (used[k] || l.args.size() != 2 || !(l.args[0] == slots[j].var)) continue;
      auto name = l.predicate.name();
      if (name != "suc" && name != "suci") continue;
      auto p = position(l.args[1]);
      if (!p || *p >= j) continue;
      if (cross && (name != "suci" || *p != j - 1)) continue;
      if (!best_k || *p > best_pos) {
        best_k = k;
        best_pos = *p;
      }
    }
    if (best_k) {
      conn[j] = b.clause.body[*best_k];
      used[*best_k] = 1;
    }
  }

  // remaining literals hang off the level of their latest event
  std::vector<std::vector<Literal>> extra(std::max<std::size_t>(m, 1));
  for (std::size_t k = 0; k < b.clause.body.size(); ++k) {
    if (used[k]) continue;
    const auto& l = b.clause.body[k];
    std::size_t level = 0;
    for (const auto& t : l.args)
      if (auto p = position(t)) level = std::max(level, *p);
    extra[level].push_back(l);
  }

  std::size_t first_end = 1;  // events [0, first_end) form the mandatory segment
  if (m >= 2 && slots[1].origin == slots[0].origin) first_end = 2;
  if (m == 0) first_end = 0;

  std::function<DlabExpr(std::size_t)> level = [&](std::size_t j) {
    std::vector<DlabExpr> parts;
    if (event_lit[j]) parts.push_back(DlabExpr::literal(*event_lit[j]));
    if (conn[j]) parts.push_back(DlabExpr::literal(*conn[j]));
    for (const auto& l : extra[j]) parts.push_back(DlabExpr::optional(DlabExpr::literal(l)));
    if (j + 1 < m) parts.push_back(DlabExpr::optional(level(j + 1)));
    return DlabExpr::all_of(std::move(parts));
  };

  std::vector<DlabExpr> parts;
  for (std::size_t j = 0; j < first_end; ++j) {
    if (event_lit[j]) parts.push_back(DlabExpr::literal(*event_lit[j]));
    if (conn[j]) parts.push_back(DlabExpr::literal(*conn[j]));
  }
  for (std::size_t j = 0; j < std::max<std::size_t>(first_end, 1) && j < extra.size(); ++j)
    for (const auto& l : extra[j]) parts.push_back(DlabExpr::optional(DlabExpr::literal(l)));
  if (first_end < m) parts.push_back(DlabExpr::optional(level(first_end)));
  return DlabExpr::all_of(std::move(parts));
}

}  // namespace detail

// 1-1 choice between one block per distinct bottom clause.
inline DlabTemplate synthesize_bias(const std::vector<BottomClause>& bottoms, const PredicateSchema& schema) {
  if (bottoms.empty()) throw UsageError("bias synthesis needs at least one bottom clause");
  std::vector<DlabExpr> blocks;
  std::set<std::string> seen;
  for (const auto& b : bottoms) {
    auto key = canonical_text(b.clause) + "|" + b.merge.to_string();
    if (!seen.insert(key).second) continue;
    blocks.push_back(detail::bottom_block(b, schema));
  }
  return DlabTemplate(DlabExpr::choice(1, 1, std::move(blocks)));
}

// ---------------------------------------------------------------------------
// Naive bias

namespace detail {

inline DlabExpr domain_literal(const PredicateInfo& p, const std::vector<Term>& vars) {
  std::vector<DlabArg> args;
  std::size_t next_var = 0;
  for (std::size_t pos = 0; pos < p.arity; ++pos) {
    auto it = std::find_if(p.domains.begin(), p.domains.end(), [&](const auto& d) { return d.first == pos; });
    if (it != p.domains.end()) {
      args.push_back(DlabArg::one_of(it->second));
    } else if (next_var < vars.size()) {
      args.push_back(DlabArg::fixed(vars[next_var++]));
    } else {
      args.push_back(DlabArg::fixed(Term::variable("A" + std::to_string(pos))));
    }
  }
  return DlabExpr::literal(p.name, std::move(args));
}

}  // namespace detail

// Every sequence of up to maxEvents events chained by suc or suci, with every
// attribute value and every relational literal between an earlier and a later
// event. `source` restricts events and relations to one source.
inline DlabTemplate naive_bias(const PredicateSchema& schema, std::size_t maxEvents,
                               const std::optional<std::string>& source = std::nullopt) {
  if (maxEvents == 0) throw UsageError("naive bias needs at least one event");
  std::vector<const PredicateInfo*> events, rels;
  for (const auto* p : schema.with_role(PredicateRole::Event))
    if (!source || p->source == *source) events.push_back(p);
  for (const auto* p : schema.with_role(PredicateRole::Relational))
    if (!source || p->source == *source) rels.push_back(p);
  if (events.empty()) throw UsageError("schema declares no event predicate" + (source ? " for source " + *source : ""));

  auto var = [](std::size_t j) { return Term::variable("E" + std::to_string(j)); };
  auto event_choice = [&](std::size_t j) {
    std::vector<DlabExpr> opts;
    for (const auto* p : events) opts.push_back(detail::domain_literal(*p, {var(j)}));
    return DlabExpr::choice(1, 1, std::move(opts));
  };
  std::function<DlabExpr(std::size_t)> level = [&](std::size_t j) {
    std::vector<DlabExpr> parts{event_choice(j)};
    if (j > 1) {
      parts.push_back(DlabExpr::choice(1, 1, {DlabExpr::literal(Literal("suc", {var(j), var(j - 1)})),
                                              DlabExpr::literal(Literal("suci", {var(j), var(j - 1)}))}));
      for (std::size_t i = 1; i < j; ++i)
        for (const auto* r : rels) parts.push_back(DlabExpr::optional(detail::domain_literal(*r, {var(i), var(j)})));
    }
    if (j < maxEvents) parts.push_back(DlabExpr::optional(level(j + 1)));
    return DlabExpr::all_of(std::move(parts));
  };
  return DlabTemplate(level(1));
}

// ---------------------------------------------------------------------------
// Pipeline

struct MultisourceParams {
  LearnerParams mono;   // steps 1-2
  LearnerParams final;  // step 6
};

struct ClassArtifacts {
  std::vector<BottomClause> bottoms;
  std::optional<DlabTemplate> bias;
  std::vector<std::string> warnings;
};

struct MultisourceResult {
  std::map<std::string, Theory> mono;  // per source
  Aggregation aggregation;
  std::map<std::string, ClassArtifacts> artifacts;  // per class
  Theory theory;
  SearchStats stats;  // every learning step, monosource included
  std::vector<std::string> warnings;
};

// Bottom clauses for one class from the two monosource theories.
inline std::vector<BottomClause> class_bottoms(const std::string& label, const std::vector<Clause>& h1s,
                                               const std::vector<Clause>& h2s,
                                               const std::vector<InterleavingConstraint>& constraints,
                                               const PredicateSchema& schema, std::vector<std::string>& warnings) {
  Clause empty{class_head(label), {}};
  const std::vector<Clause> none{empty};
  const auto& a = h1s.empty() ? none : h1s;
  const auto& b = h2s.empty() ? none : h2s;
  std::vector<BottomClause> out;
  for (const auto& h1 : a)
    for (const auto& h2raw : b) {
      auto [x, y] = standardize_apart(h1, h2raw);
      auto merges = filter_constraints(interleavings(x, y, schema), constraints, x, y, schema);
      if (merges.empty()) {
        warnings.push_back("class " + label + ": every interleaving of a rule pair violates the constraints");
        continue;
      }
      for (const auto& m : merges) out.push_back(make_bottom_clause(x, y, m));
    }
  // The two one-sided merges never put a foreign event between same-source events, so
  // some merge always survives; blocks built from them keep each rule whole (voting).
  return out;
}

inline MultisourceResult biased_multisource_learn(const Dataset& data, const std::map<std::string, DlabTemplate>& biasPerSource,
                                                  const std::vector<InterleavingConstraint>& constraints,
                                                  const MultisourceParams& params) {
  auto sources = data.sources();
  if (sources.size() != 2) throw UsageError("the multisource pipeline takes exactly two sources");
  for (const auto& s : sources)
    if (!biasPerSource.count(s)) throw UsageError("no bias given for source " + s);
  const auto& schema = data.schema();
  auto sat = data.saturated();

  MultisourceResult r;
  for (const auto& s : sources) {
    r.mono[s] = learn_theory(sat.examples(s), data.classes(), biasPerSource.at(s), params.mono);
    r.stats += r.mono[s].total_stats();
  }
  r.aggregation = aggregate(sat);
  for (const auto& d : r.aggregation.dropped)
    r.warnings.push_back("situation " + std::to_string(d.situation) + " dropped: " + d.reason);

  std::set<std::string> present;
  for (const auto& e : r.aggregation.examples) present.insert(e.label);
  if (present.size() < 2) throw UsageError("aggregated examples cover fewer than two classes");

  for (const auto& label : data.classes()) {
    if (!present.count(label)) continue;
    auto& art = r.artifacts[label];
    const auto& h1s = r.mono[sources[0]].clauses(label);
    const auto& h2s = r.mono[sources[1]].clauses(label);
    if (h1s.empty() && h2s.empty()) {
      art.warnings.push_back("class " + label + " skipped: no monosource rule on either source");
      r.warnings.push_back(art.warnings.back());
      continue;
    }
    art.bottoms = class_bottoms(label, h1s, h2s, constraints, schema, art.warnings);
    art.bias = synthesize_bias(art.bottoms, schema);
    for (const auto& w : art.warnings) r.warnings.push_back(w);
  }
  for (const auto& label : data.classes()) {
    auto it = r.artifacts.find(label);
    if (it == r.artifacts.end() || !it->second.bias) continue;
    r.theory.classes[label] = learn_class(label, r.aggregation.examples, *it->second.bias, params.final);
  }
  r.stats += r.theory.total_stats();
  return r;
}

}  // namespace relic
