#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace relic {

// Interned identifier. Equality and hashing are by id; ordering that must be
// stable across runs goes through the text (see name()).
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text);

  std::uint32_t id() const noexcept { return id_; }
  const std::string& name() const;

  friend bool operator==(Symbol a, Symbol b) noexcept { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) noexcept { return a.id_ != b.id_; }

 private:
  std::uint32_t id_ = 0;
};

namespace detail {

class SymbolTable {
 public:
  static SymbolTable& instance() {
    static SymbolTable table;
    return table;
  }

  std::uint32_t intern(std::string_view text) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = ids_.find(text); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = ids_.find(text); it != ids_.end()) return it->second;
    names_.emplace_back(text);
    auto id = static_cast<std::uint32_t>(names_.size() - 1);
    ids_.emplace(std::string_view(names_.back()), id);
    return id;
  }

  const std::string& name(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    return names_[id];
  }

 private:
  SymbolTable() { names_.emplace_back(""); ids_.emplace(std::string_view(names_.back()), 0); }

  mutable std::shared_mutex mutex_;
  std::deque<std::string> names_;  // deque: element addresses stay valid
  std::unordered_map<std::string_view, std::uint32_t> ids_;
};

}  // namespace detail

inline Symbol::Symbol(std::string_view text)
    : id_(detail::SymbolTable::instance().intern(text)) {}

inline const std::string& Symbol::name() const {
  return detail::SymbolTable::instance().name(id_);
}

}  // namespace relic

template <>
struct std::hash<relic::Symbol> {
  std::size_t operator()(relic::Symbol s) const noexcept { return s.id(); }
};
