#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relic/clause.hpp"
#include "relic/error.hpp"
#include "relic/facts.hpp"
#include "relic/model_io.hpp"
#include "relic/schema.hpp"

namespace relic {

// Three-way split of a numeric range: v < low, low <= v <= high, v > high.
struct Thresholds {
  std::int64_t low = 0;
  std::int64_t high = 0;
  std::string below = "short";
  std::string inside = "normal";
  std::string above = "long";

  const std::string& categorize(std::int64_t v) const {
    if (v < low) return below;
    if (v > high) return above;
    return inside;
  }
  void validate(const std::string& what) const {
    if (!(low < high)) throw UsageError(what + ": thresholds must be strictly increasing");
  }
};

inline Thresholds delay_thresholds(std::int64_t low, std::int64_t high) {
  return {low, high, "short", "normal", "long"};
}
inline Thresholds level_thresholds(std::int64_t low, std::int64_t high) {
  return {low, high, "low", "normal", "high"};
}

// name(A, B, category) linking an event of `from` to the next event of `to`.
// With from == to the pair is two consecutive `from` events; otherwise B is the
// first `to` event after A with no other `from` event in between.
struct TimingRule {
  std::string name;
  std::string from;
  std::string to;
  Thresholds delay;
};

// cycle(D, before, S, after) for a `first` event D immediately followed by a
// `second` event S: `before` categorizes the drop from the previous `second`
// event to D ("none" if there is none), `after` the rise from D to S.
struct CycleRule {
  std::string name = "cycle_abp";
  std::string first = "dias";
  std::string second = "sys";
  Thresholds pulse = level_thresholds(30, 60);
};

struct SymbolizationConfig {
  std::vector<TimingRule> timing;
  std::set<std::string> amplitude_events;  // first attribute is a level in mmHg
  Thresholds amplitude = level_thresholds(70, 110);
  std::optional<CycleRule> cycle;
  std::size_t suc_window = 8;  // suc(X,Y) only for events at most this many apart

  // Cardiac defaults for ECG (p, qrs) and ABP (dias, sys) streams.
  static SymbolizationConfig cardiac() {
    SymbolizationConfig c;
    c.timing = {
        {"rr1", "qrs", "qrs", delay_thresholds(600, 1000)},
        {"pp1", "p", "p", delay_thresholds(600, 1000)},
        {"ss1", "sys", "sys", delay_thresholds(600, 1000)},
        {"pr1", "p", "qrs", delay_thresholds(120, 200)},
        {"ds1", "dias", "sys", delay_thresholds(120, 200)},
    };
    c.amplitude_events = {"dias", "sys"};
    c.cycle = CycleRule{};
    return c;
  }

  void validate() const {
    for (const auto& t : timing) t.delay.validate(t.name);
    amplitude.validate("amplitude");
    if (cycle) cycle->pulse.validate(cycle->name);
    if (suc_window == 0) throw UsageError("suc window must be positive");
  }

  // Every predicate name saturation may produce, given the event predicates.
  std::set<std::string> derived_predicates(const std::set<std::string>& events) const {
    std::set<std::string> out{"suc", "suci"};
    for (const auto& t : timing) out.insert(t.name);
    if (cycle) out.insert(cycle->name);
    out.insert(events.begin(), events.end());
    return out;
  }
};

namespace detail {

inline void require_timeline(const std::vector<RawEvent>& events) {
  for (std::size_t i = 1; i < events.size(); ++i)
    if (timeline_less(events[i], events[i - 1]))
      throw InternalError("raw events out of timeline order at '" + events[i].id + "'");
}

inline Literal fact(const std::string& pred, std::initializer_list<std::string> args) {
  std::vector<Term> terms;
  for (const auto& a : args) terms.push_back(Term::constant(a));
  return Literal(pred, std::move(terms));
}

inline std::int64_t level_of(const RawEvent& e) {
  if (e.attrs.empty() || !is_integer(e.attrs[0]))
    throw FormatError("event '" + e.id + "' has no numeric level attribute");
  return std::stoll(e.attrs[0]);
}

// suc/suci facts over one timeline, restricted by `keep` (pair filter).
template <typename Keep>
void succession_facts(const std::vector<RawEvent>& tl, std::size_t window, Keep keep,
                      std::vector<Literal>& out) {
  for (std::size_t i = 0; i < tl.size(); ++i) {
    for (std::size_t j = i + 1; j < tl.size() && j - i <= window; ++j) {
      if (!keep(tl[j], tl[i])) continue;
      out.push_back(fact("suc", {tl[j].id, tl[i].id}));
      if (j == i + 1) out.push_back(fact("suci", {tl[j].id, tl[i].id}));
    }
  }
}

}  // namespace detail

// Logical form of one raw event: pred(id, attrs...) with levels categorized.
inline Literal event_fact(const RawEvent& e, const SymbolizationConfig& cfg) {
  std::vector<Term> args{Term::constant(e.id)};
  bool level = cfg.amplitude_events.count(e.predicate) > 0;
  for (std::size_t k = 0; k < e.attrs.size(); ++k) {
    if (level && k == 0)
      args.push_back(Term::constant(cfg.amplitude.categorize(detail::level_of(e))));
    else
      args.push_back(Term::constant(e.attrs[k]));
  }
  return Literal(e.predicate, std::move(args));
}

// Facts derivable from one source's timeline.
inline std::vector<Literal> derive_facts(const std::vector<RawEvent>& tl, const SymbolizationConfig& cfg) {
  std::vector<Literal> out;
  for (const auto& e : tl) out.push_back(event_fact(e, cfg));
  detail::succession_facts(tl, cfg.suc_window, [](const RawEvent&, const RawEvent&) { return true; }, out);

  for (const auto& rule : cfg.timing) {
    for (std::size_t i = 0; i < tl.size(); ++i) {
      if (tl[i].predicate != rule.from) continue;
      for (std::size_t j = i + 1; j < tl.size(); ++j) {
        if (tl[j].predicate == rule.to) {
          out.push_back(detail::fact(rule.name, {tl[i].id, tl[j].id,
                                                 rule.delay.categorize(tl[j].time - tl[i].time)}));
          break;
        }
        if (tl[j].predicate == rule.from) break;
      }
    }
  }

  if (cfg.cycle) {
    const CycleRule& cy = *cfg.cycle;
    std::optional<std::int64_t> last_second;
    for (std::size_t i = 0; i < tl.size(); ++i) {
      if (tl[i].predicate == cy.second) {
        last_second = detail::level_of(tl[i]);
        continue;
      }
      if (tl[i].predicate != cy.first || i + 1 >= tl.size() || tl[i + 1].predicate != cy.second)
        continue;
      std::int64_t d = detail::level_of(tl[i]);
      std::string before = last_second ? cy.pulse.categorize(*last_second - d) : std::string("none");
      std::string after = cy.pulse.categorize(detail::level_of(tl[i + 1]) - d);
      out.push_back(detail::fact(cy.name, {tl[i].id, before, tl[i + 1].id, after}));
    }
  }
  return out;
}

// Rebuilds the derived part of an interpretation's facts from its raw events.
// Stored facts with a derivable predicate are replaced; any other stored
// background fact is kept. Idempotent.
inline Interpretation saturate(const Interpretation& in, const SymbolizationConfig& cfg,
                               const PredicateSchema* schema = nullptr) {
  detail::require_timeline(in.raw_events);
  std::set<std::string> events;
  for (const auto& e : in.raw_events) events.insert(e.predicate);
  auto derived_names = cfg.derived_predicates(events);

  std::vector<Literal> facts;
  for (const auto& f : in.facts.atoms())
    if (!derived_names.count(f.predicate.name())) facts.push_back(f);
  auto derived = derive_facts(in.raw_events, cfg);
  facts.insert(facts.end(), derived.begin(), derived.end());

  if (schema && !schema->empty()) {
    for (const auto& f : facts) {
      const auto* info = schema->find(f.predicate.name());
      if (!info || info->arity != f.arity())
        throw FormatError("fact " + to_string(f) + " does not match the predicate schema");
    }
  }
  Interpretation out = in;
  out.facts = FactSet(std::move(facts));
  return out;
}

// Same-situation examples agree on their label.
inline bool check_consistency(const Interpretation& a, const Interpretation& b) {
  if (a.situation != b.situation)
    throw UsageError("consistency check across different situations " +
                     std::to_string(a.situation) + " and " + std::to_string(b.situation));
  return a.label == b.label;
}

}  // namespace relic
