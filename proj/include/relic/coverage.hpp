#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "relic/clause.hpp"
#include "relic/facts.hpp"

namespace relic {

namespace detail {

// Literal list with variables replaced by dense slot numbers.
struct CompiledBody {
  struct Arg {
    bool variable = false;
    std::uint32_t slot = 0;  // when variable
    Symbol value;            // when constant
  };
  struct Lit {
    Symbol predicate;
    std::vector<Arg> args;
  };
  std::vector<Lit> lits;
  std::vector<Term> slot_terms;

  explicit CompiledBody(const std::vector<Literal>& literals) {
    std::unordered_map<std::uint32_t, std::uint32_t> slots;
    lits.reserve(literals.size());
    for (const auto& l : literals) {
      if (l.args.size() > 16) throw UsageError("literal arity above 16: " + to_string(l));
      Lit cl{l.predicate, {}};
      cl.args.reserve(l.args.size());
      for (const auto& t : l.args) {
        Arg a;
        if (t.is_variable()) {
          a.variable = true;
          auto [it, fresh] = slots.emplace(t.symbol().id(), static_cast<std::uint32_t>(slot_terms.size()));
          if (fresh) slot_terms.push_back(t);
          a.slot = it->second;
        } else {
          a.value = t.symbol();
        }
        cl.args.push_back(a);
      }
      lits.push_back(std::move(cl));
    }
  }
};

// Left-to-right backtracking matcher of a compiled body against a fact set.
class Matcher {
 public:
  Matcher(const CompiledBody& body, const FactSet& facts)
      : body_(body), facts_(facts), binding_(body.slot_terms.size()), bound_(body.slot_terms.size(), 0) {}

  bool run() { return solve(0); }

  Substitution substitution() const {
    Substitution s;
    for (std::size_t i = 0; i < binding_.size(); ++i)
      if (bound_[i]) s.bind(body_.slot_terms[i], Term::parse(binding_[i].name()));
    return s;
  }

 private:
  bool solve(std::size_t i) {
    if (i == body_.lits.size()) return true;
    const auto& lit = body_.lits[i];
    const FactSet::Group* g = facts_.group(lit.predicate, lit.args.size());
    if (!g) return false;

    auto resolved = [&](std::size_t pos, Symbol& out) {
      const auto& a = lit.args[pos];
      if (!a.variable) {
        out = a.value;
        return true;
      }
      if (bound_[a.slot]) {
        out = binding_[a.slot];
        return true;
      }
      return false;
    };

    const std::vector<std::uint32_t>* candidates = nullptr;
    Symbol key;
    if (lit.args.size() >= 1 && resolved(0, key)) {
      auto it = g->by_first.find(key.id());
      if (it == g->by_first.end()) return false;
      candidates = &it->second;
    } else if (lit.args.size() >= 2 && resolved(1, key)) {
      auto it = g->by_second.find(key.id());
      if (it == g->by_second.end()) return false;
      candidates = &it->second;
    }

    auto try_row = [&](std::size_t r) {
      const Symbol* row = g->row(r);
      std::uint32_t newly[16];
      std::size_t n_new = 0;
      bool ok = true;
      for (std::size_t k = 0; k < lit.args.size() && ok; ++k) {
        const auto& a = lit.args[k];
        if (!a.variable) {
          ok = a.value == row[k];
        } else if (bound_[a.slot]) {
          ok = binding_[a.slot] == row[k];
        } else {
          binding_[a.slot] = row[k];
          bound_[a.slot] = 1;
          if (n_new < 16) newly[n_new++] = a.slot;
        }
      }
      if (ok && solve(i + 1)) return true;
      for (std::size_t k = 0; k < n_new; ++k) bound_[newly[k]] = 0;
      return false;
    };

    if (candidates) {
      for (auto r : *candidates)
        if (try_row(r)) return true;
    } else {
      for (std::size_t r = 0; r < g->rows; ++r)
        if (try_row(r)) return true;
    }
    return false;
  }

  const CompiledBody& body_;
  const FactSet& facts_;
  std::vector<Symbol> binding_;
  std::vector<char> bound_;
};

}  // namespace detail

// Reusable coverage test for one clause body over many fact sets.
class CoverageTest {
 public:
  explicit CoverageTest(const std::vector<Literal>& body) : compiled_(body) {}
  explicit CoverageTest(const Clause& c) : compiled_(c.body) {}

  bool operator()(const FactSet& facts) const {
    detail::Matcher m(compiled_, facts);
    return m.run();
  }

 private:
  detail::CompiledBody compiled_;
};

// True iff some grounding of the body lies inside `facts` (existential semantics).
inline bool covers(const Clause& c, const FactSet& facts) { return CoverageTest(c)(facts); }

// Witness substitution for covers(), if any.
inline std::optional<Substitution> covering_substitution(const Clause& c, const FactSet& facts) {
  detail::CompiledBody body(c.body);
  detail::Matcher m(body, facts);
  if (!m.run()) return std::nullopt;
  return m.substitution();
}

// Disjunctive reading of a class theory.
inline bool theory_covers(const std::vector<Clause>& theory, const FactSet& facts) {
  for (const auto& c : theory)
    if (covers(c, facts)) return true;
  return false;
}

// Plotkin subsumption: some substitution maps every literal of c (head and
// body) onto a literal of d.
inline bool theta_subsumes(const Clause& c, const Clause& d) {
  std::vector<Literal> target = d.body;
  target.push_back(d.head);
  FactSet frozen = FactSet::frozen(std::move(target));
  std::vector<Literal> pattern;
  pattern.reserve(c.body.size() + 1);
  pattern.push_back(c.head);
  pattern.insert(pattern.end(), c.body.begin(), c.body.end());
  detail::CompiledBody body(pattern);
  detail::Matcher m(body, frozen);
  return m.run();
}

}  // namespace relic
