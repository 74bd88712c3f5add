#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "relic/clause.hpp"
#include "relic/error.hpp"

namespace relic {

// Immutable set of ground atoms with per-predicate argument indexes.
// Atoms are kept unique and sorted by their printed form.
class FactSet {
 public:
  FactSet() = default;
  explicit FactSet(std::vector<Literal> atoms) { assign(std::move(atoms)); }

  // Builds a set from literals whose variables are treated as constants
  // (used to freeze the target clause of a subsumption test).
  static FactSet frozen(std::vector<Literal> atoms) {
    FactSet fs;
    fs.allow_variables_ = true;
    fs.assign(std::move(atoms));
    return fs;
  }

  const std::vector<Literal>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

  bool contains(const Literal& l) const {
    auto* g = group(l.predicate, l.arity());
    if (!g) return false;
    for (std::size_t r = 0; r < g->rows; ++r)
      if (std::equal(l.args.begin(), l.args.end(), g->row(r),
                     [](const Term& t, Symbol s) { return t.symbol() == s; }))
        return true;
    return false;
  }

  FactSet united(const FactSet& other) const {
    std::vector<Literal> all = atoms_;
    all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
    return FactSet(std::move(all));
  }

  friend bool operator==(const FactSet& a, const FactSet& b) { return a.atoms_ == b.atoms_; }

  struct Group {
    std::size_t arity = 0;
    std::size_t rows = 0;
    std::vector<Symbol> flat;  // rows * arity
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> by_first;
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> by_second;

    const Symbol* row(std::size_t r) const { return flat.data() + r * arity; }
  };

  const Group* group(Symbol pred, std::size_t arity) const {
    auto it = groups_.find(key(pred, arity));
    return it == groups_.end() ? nullptr : &it->second;
  }

 private:
  static std::uint64_t key(Symbol pred, std::size_t arity) {
    return (static_cast<std::uint64_t>(pred.id()) << 8) | (arity & 0xff);
  }

  void assign(std::vector<Literal> atoms) {
    std::unordered_set<Literal> seen;
    std::vector<Literal> unique;
    unique.reserve(atoms.size());
    for (auto& a : atoms) {
      if (!allow_variables_ && !a.is_ground())
        throw FormatError("non-ground fact " + to_string(a));
      if (seen.insert(a).second) unique.push_back(std::move(a));
    }
    std::vector<std::pair<std::string, std::size_t>> keyed;
    keyed.reserve(unique.size());
    for (std::size_t i = 0; i < unique.size(); ++i) keyed.emplace_back(to_string(unique[i]), i);
    std::sort(keyed.begin(), keyed.end());
    atoms_.clear();
    atoms_.reserve(unique.size());
    for (auto& [t, i] : keyed) atoms_.push_back(std::move(unique[i]));

    groups_.clear();
    for (const auto& a : atoms_) {
      Group& g = groups_[key(a.predicate, a.arity())];
      g.arity = a.arity();
      auto r = static_cast<std::uint32_t>(g.rows++);
      for (const auto& t : a.args) g.flat.push_back(t.symbol());
      if (g.arity >= 1) g.by_first[a.args[0].symbol().id()].push_back(r);
      if (g.arity >= 2) g.by_second[a.args[1].symbol().id()].push_back(r);
    }
  }

  bool allow_variables_ = false;
  std::vector<Literal> atoms_;
  std::unordered_map<std::uint64_t, Group> groups_;
};

}  // namespace relic
