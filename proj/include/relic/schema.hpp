#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relic/clause.hpp"
#include "relic/error.hpp"

namespace relic {

enum class PredicateRole { Event, Relational, GlobalRelational, Attribute };

inline std::string to_string(PredicateRole r) {
  switch (r) {
    case PredicateRole::Event: return "event";
    case PredicateRole::Relational: return "relational";
    case PredicateRole::GlobalRelational: return "global";
    case PredicateRole::Attribute: return "attribute";
  }
  return "?";
}

inline PredicateRole parse_role(const std::string& s) {
  if (s == "event") return PredicateRole::Event;
  if (s == "relational") return PredicateRole::Relational;
  if (s == "global") return PredicateRole::GlobalRelational;
  if (s == "attribute") return PredicateRole::Attribute;
  throw FormatError("unknown predicate role '" + s + "'");
}

// Shared source tag for global relational predicates.
inline const std::string kSharedSource = "*";

struct PredicateInfo {
  std::string name;
  std::size_t arity = 0;  // arity of the logical (saturated) form
  PredicateRole role = PredicateRole::Attribute;
  std::string source = kSharedSource;
  // Attribute value domain per non-variable argument position, used to build
  // naive biases: positions listed in order, each with its value set.
  std::vector<std::pair<std::size_t, std::vector<std::string>>> domains;
};

// Declares every predicate of a problem exactly once.
class PredicateSchema {
 public:
  void add(PredicateInfo info) {
    if (preds_.count(info.name))
      throw UsageError("predicate '" + info.name + "' declared twice");
    if (info.role == PredicateRole::GlobalRelational) info.source = kSharedSource;
    order_.push_back(info.name);
    preds_.emplace(info.name, std::move(info));
  }

  const PredicateInfo* find(const std::string& name) const {
    auto it = preds_.find(name);
    return it == preds_.end() ? nullptr : &it->second;
  }
  const PredicateInfo& at(const std::string& name) const {
    if (auto* p = find(name)) return *p;
    throw UsageError("predicate '" + name + "' is not declared");
  }

  bool is_event(const Literal& l) const {
    auto* p = find(l.predicate.name());
    return p && p->role == PredicateRole::Event;
  }
  bool is_global(const Literal& l) const {
    auto* p = find(l.predicate.name());
    return p && p->role == PredicateRole::GlobalRelational;
  }
  std::optional<std::string> source_of(const Literal& l) const {
    auto* p = find(l.predicate.name());
    if (!p || p->source == kSharedSource) return std::nullopt;
    return p->source;
  }

  std::vector<const PredicateInfo*> predicates() const {
    std::vector<const PredicateInfo*> out;
    for (const auto& n : order_) out.push_back(&preds_.at(n));
    return out;
  }
  std::vector<const PredicateInfo*> with_role(PredicateRole role) const {
    std::vector<const PredicateInfo*> out;
    for (const auto* p : predicates())
      if (p->role == role) out.push_back(p);
    return out;
  }
  std::set<std::string> sources() const {
    std::set<std::string> out;
    for (const auto& [n, p] : preds_)
      if (p.source != kSharedSource) out.insert(p.source);
    return out;
  }

  // Restriction to one source plus the shared predicates.
  PredicateSchema restricted_to(const std::string& source) const {
    PredicateSchema out;
    for (const auto* p : predicates())
      if (p->source == source || p->source == kSharedSource) out.add(*p);
    return out;
  }

  // Union of two schemas; a predicate present in both must agree.
  static PredicateSchema merge(const PredicateSchema& a, const PredicateSchema& b) {
    PredicateSchema out = a;
    for (const auto* p : b.predicates()) {
      if (auto* q = out.find(p->name)) {
        if (q->arity != p->arity || q->role != p->role || q->source != p->source)
          throw UsageError("conflicting declarations of '" + p->name + "'");
        continue;
      }
      out.add(*p);
    }
    return out;
  }

  bool empty() const noexcept { return preds_.empty(); }

 private:
  std::vector<std::string> order_;
  std::map<std::string, PredicateInfo> preds_;
};

// Event variables of a clause: first argument of each event literal, in body order.
inline std::vector<std::string> event_variables(const Clause& c, const PredicateSchema& schema) {
  std::vector<std::string> out;
  for (const auto& l : c.body) {
    if (!schema.is_event(l) || l.args.empty() || !l.args[0].is_variable()) continue;
    if (std::find(out.begin(), out.end(), l.args[0].name()) == out.end())
      out.push_back(l.args[0].name());
  }
  return out;
}

}  // namespace relic
