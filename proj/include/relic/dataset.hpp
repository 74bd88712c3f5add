#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "relic/error.hpp"
#include "relic/model_io.hpp"
#include "relic/saturate.hpp"
#include "relic/schema.hpp"

namespace relic {

// Labelled examples grouped by source, at most one per (source, situation).
class Dataset {
 public:
  Dataset() = default;
  Dataset(PredicateSchema schema, SymbolizationConfig config, std::vector<std::string> classes)
      : schema_(std::move(schema)), config_(std::move(config)), classes_(std::move(classes)) {}

  const PredicateSchema& schema() const noexcept { return schema_; }
  const SymbolizationConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  void set_classes(std::vector<std::string> c) { classes_ = std::move(c); }

  std::vector<std::string> sources() const {
    std::vector<std::string> out;
    for (const auto& [s, v] : by_source_) out.push_back(s);
    return out;
  }

  void add(Interpretation interp) {
    auto& list = by_source_[interp.source];
    auto pos = std::lower_bound(list.begin(), list.end(), interp.situation,
                                [](const Interpretation& a, int k) { return a.situation < k; });
    if (pos != list.end() && pos->situation == interp.situation)
      throw UsageError("situation " + std::to_string(interp.situation) +
                       " already present for source " + interp.source);
    if (std::find(classes_.begin(), classes_.end(), interp.label) == classes_.end())
      classes_.push_back(interp.label);
    list.insert(pos, std::move(interp));
  }

  const std::vector<Interpretation>& examples(const std::string& source) const {
    static const std::vector<Interpretation> none;
    auto it = by_source_.find(source);
    return it == by_source_.end() ? none : it->second;
  }

  const Interpretation* find(const std::string& source, int situation) const {
    const auto& list = examples(source);
    auto pos = std::lower_bound(list.begin(), list.end(), situation,
                                [](const Interpretation& a, int k) { return a.situation < k; });
    return pos != list.end() && pos->situation == situation ? &*pos : nullptr;
  }

  std::vector<int> situations() const {
    std::set<int> all;
    for (const auto& [s, list] : by_source_)
      for (const auto& i : list) all.insert(i.situation);
    return {all.begin(), all.end()};
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [s, list] : by_source_) n += list.size();
    return n;
  }

  // Copy keeping only the listed situations.
  Dataset subset(const std::set<int>& keep) const {
    Dataset out(schema_, config_, classes_);
    for (const auto& [s, list] : by_source_) {
      auto& dst = out.by_source_[s];
      for (const auto& i : list)
        if (keep.count(i.situation)) dst.push_back(i);
    }
    return out;
  }

  Dataset saturated() const {
    Dataset out(schema_, config_, classes_);
    for (const auto& [s, list] : by_source_) {
      auto& dst = out.by_source_[s];
      for (const auto& i : list) dst.push_back(saturate(i, config_, &schema_));
    }
    return out;
  }

 private:
  PredicateSchema schema_;
  SymbolizationConfig config_;
  std::vector<std::string> classes_;
  std::map<std::string, std::vector<Interpretation>> by_source_;
};

}  // namespace relic
