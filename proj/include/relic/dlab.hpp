#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "relic/clause.hpp"
#include "relic/error.hpp"
#include "relic/lexer.hpp"

namespace relic {

// ---------------------------------------------------------------------------
// Tree form, used for construction and parsing.

// One argument of a literal template: a fixed term, or an inline choice
// `min-max:[c1,...,cn]` that expands to the chosen constants in list order.
struct DlabArg {
  bool is_choice = false;
  Term term;
  std::size_t min = 1, max = 1;
  bool min_len = false, max_len = false;
  std::vector<Term> options;

  static DlabArg fixed(Term t) {
    DlabArg a;
    a.term = t;
    return a;
  }
  static DlabArg one_of(std::vector<std::string> values) {
    DlabArg a;
    a.is_choice = true;
    for (const auto& v : values) a.options.push_back(Term::parse(v));
    return a;
  }
};

// A literal template or a choice block `min-max:[children]`.
struct DlabExpr {
  bool is_choice = false;
  std::size_t min = 0, max = 0;
  bool min_len = false, max_len = false;
  std::vector<DlabExpr> children;
  Symbol predicate;
  std::vector<DlabArg> args;

  static DlabExpr literal(const Literal& l) {
    DlabExpr e;
    e.predicate = l.predicate;
    for (const auto& t : l.args) e.args.push_back(DlabArg::fixed(t));
    return e;
  }
  static DlabExpr literal(std::string_view pred, std::vector<DlabArg> args) {
    DlabExpr e;
    e.predicate = Symbol(pred);
    e.args = std::move(args);
    return e;
  }
  static DlabExpr choice(std::size_t min, std::size_t max, std::vector<DlabExpr> children) {
    DlabExpr e;
    e.is_choice = true;
    e.min = min;
    e.max = max;
    e.children = std::move(children);
    return e;
  }
  // len-len:[children]
  static DlabExpr all_of(std::vector<DlabExpr> children) {
    DlabExpr e = choice(0, 0, std::move(children));
    e.min_len = e.max_len = true;
    return e;
  }
  // 0-len:[children]
  static DlabExpr any_of(std::vector<DlabExpr> children) {
    DlabExpr e = choice(0, 0, std::move(children));
    e.max_len = true;
    return e;
  }
  // 0-1:[child]
  static DlabExpr optional(DlabExpr child) { return choice(0, 1, {std::move(child)}); }
};

// Number of valid selections; `saturated` when the true value exceeds 2^64-1.
struct SpaceSize {
  std::uint64_t value = 0;
  bool saturated = false;

  friend bool operator<(const SpaceSize& a, const SpaceSize& b) {
    if (a.saturated != b.saturated) return b.saturated;
    return a.value < b.value;
  }
  std::string to_string() const {
    return saturated ? ">=" + std::to_string(value) : std::to_string(value);
  }
};

// Which children each choice picked and which options each inline choice picked.
struct Selection {
  std::vector<std::uint64_t> choice_mask;  // indexed by node id
  std::vector<std::uint64_t> inline_mask;  // indexed by inline id

  friend bool operator==(const Selection&, const Selection&) = default;
  friend bool operator<(const Selection& a, const Selection& b) {
    if (a.choice_mask != b.choice_mask) return a.choice_mask < b.choice_mask;
    return a.inline_mask < b.inline_mask;
  }
};

namespace detail {

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, bool& sat) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    sat = true;
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a + b;
}
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, bool& sat) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    sat = true;
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

// Calls f(mask) for every subset of n items with size in [lo, hi], by size
// then lexicographically by member indexes.
template <typename F>
void for_each_subset(std::size_t n, std::size_t lo, std::size_t hi, F&& f) {
  std::vector<std::size_t> idx;
  for (std::size_t k = lo; k <= hi && k <= n; ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::uint64_t mask = 0;
      for (auto i : idx) mask |= std::uint64_t{1} << i;
      f(mask);
      if (k == 0) break;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Flattened, immutable grammar.

class DlabTemplate {
 public:
  struct Inline {
    std::size_t min = 1, max = 1;
    bool min_len = false, max_len = false;
    std::vector<Term> options;
  };
  struct ArgSlot {
    bool is_inline = false;
    Term term;
    std::size_t inline_id = 0;
  };
  struct Node {
    bool is_choice = false;
    std::size_t parent = npos;
    std::size_t min = 0, max = 0;
    bool min_len = false, max_len = false;
    std::vector<std::size_t> children;
    Symbol predicate;
    std::vector<ArgSlot> args;
    std::vector<std::size_t> inlines;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  DlabTemplate() : DlabTemplate(DlabExpr::choice(0, 0, {})) {}
  // A lone literal is wrapped in len-len:[...] so that the root is always a
  // choice and the root-minimal selection carries no literal.
  explicit DlabTemplate(const DlabExpr& root) {
    root_ = root.is_choice ? flatten(root, npos) : flatten(DlabExpr::all_of({root}), npos);
  }

  static DlabTemplate parse(std::string_view text);

  std::size_t root() const noexcept { return root_; }
  const Node& node(std::size_t id) const { return nodes_[id]; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const Inline& inline_choice(std::size_t id) const { return inlines_[id]; }

  std::string to_text() const {
    std::string out;
    print(root_, 0, out);
    return out + "\n";
  }

  // ---- counting -----------------------------------------------------------

  SpaceSize count() const {
    bool sat = false;
    auto v = count_node(root_, sat);
    return {v, sat};
  }

  // ---- selections ---------------------------------------------------------

  Selection root_selection() const {
    return Selection{std::vector<std::uint64_t>(nodes_.size(), 0),
                     std::vector<std::uint64_t>(inlines_.size(), 0)};
  }

  bool is_root_minimal(const Selection& s) const { return s == root_selection(); }

  // Root and every node whose parent chose it.
  std::vector<char> reached(const Selection& s) const {
    std::vector<char> r(nodes_.size(), 0);
    mark_reached(root_, s, r);
    return r;
  }

  bool valid(const Selection& s) const {
    if (s.choice_mask.size() != nodes_.size() || s.inline_mask.size() != inlines_.size()) return false;
    auto r = reached(s);
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      const Node& n = nodes_[id];
      if (n.is_choice) {
        if (!r[id]) {
          if (s.choice_mask[id]) return false;
          continue;
        }
        auto k = static_cast<std::size_t>(std::popcount(s.choice_mask[id]));
        if (k < n.min || k > n.max) return false;
        if (s.choice_mask[id] >> n.children.size()) return false;
      } else {
        for (auto in : n.inlines) {
          const Inline& ic = inlines_[in];
          if (!r[id]) {
            if (s.inline_mask[in]) return false;
            continue;
          }
          auto k = static_cast<std::size_t>(std::popcount(s.inline_mask[in]));
          if (k < ic.min || k > ic.max) return false;
          if (s.inline_mask[in] >> ic.options.size()) return false;
        }
      }
    }
    return true;
  }

  // Body induced by a selection: reached literal templates in pre-order.
  std::vector<Literal> body(const Selection& s) const {
    std::vector<Literal> out;
    collect(root_, s, out);
    return out;
  }

  // ---- enumeration --------------------------------------------------------

  // Calls f(selection) for every valid selection, in the deterministic order
  // induced by children order and subset rank.
  void for_each_selection(const std::function<void(const Selection&)>& f) const {
    Selection s = root_selection();
    gen(root_, s, [&](Selection& x) { f(x); });
  }

  // ---- membership ---------------------------------------------------------

  bool member(const std::vector<Literal>& body) const {
    std::vector<Literal> distinct;
    std::vector<std::uint8_t> counts;
    for (const auto& l : body) {
      auto it = std::find(distinct.begin(), distinct.end(), l);
      if (it == distinct.end()) {
        distinct.push_back(l);
        counts.push_back(1);
      } else {
        ++counts[static_cast<std::size_t>(it - distinct.begin())];
      }
    }
    std::vector<std::vector<char>> fits(nodes_.size());
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      if (nodes_[id].is_choice) continue;
      fits[id].resize(distinct.size());
      for (std::size_t i = 0; i < distinct.size(); ++i) fits[id][i] = literal_fits(id, distinct[i]);
    }
    std::set<std::vector<std::uint8_t>> start{counts};
    auto ends = consume(root_, start, fits);
    std::vector<std::uint8_t> zero(counts.size(), 0);
    return ends.count(zero) > 0;
  }

  // ---- refinement ---------------------------------------------------------

  // Minimal valid selections strictly extending `s` that add at least one
  // literal. The root-minimal selection stands for the empty clause: its
  // refinements are the minimal valid selections carrying a literal, with every
  // instantiation of a literal reached at the root.
  std::vector<Selection> refine(const Selection& s) const {
    std::vector<Selection> out;
    if (is_root_minimal(s)) {
      lit_fill(root_, s, out);
      return out;
    }
    if (!valid(s)) throw UsageError("refine: selection is not valid");
    extend(root_, s, out);
    return out;
  }

  // a is contained in b: every choice of a is kept by b, and every literal
  // template reached by a is instantiated identically in b.
  bool contained_in(const Selection& a, const Selection& b) const {
    for (std::size_t id = 0; id < nodes_.size(); ++id)
      if (a.choice_mask[id] & ~b.choice_mask[id]) return false;
    auto r = reached(a);
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      if (nodes_[id].is_choice || !r[id]) continue;
      for (auto in : nodes_[id].inlines)
        if (a.inline_mask[in] != b.inline_mask[in]) return false;
    }
    return true;
  }

 private:
  std::size_t flatten(const DlabExpr& e, std::size_t parent) {
    std::size_t id = nodes_.size();
    nodes_.emplace_back();
    nodes_[id].parent = parent;
    if (e.is_choice) {
      if (e.children.size() > 64) throw BiasError("choice block with more than 64 children");
      std::vector<std::size_t> kids;
      for (const auto& c : e.children) kids.push_back(flatten(c, id));
      Node& n = nodes_[id];
      n.is_choice = true;
      n.children = std::move(kids);
      n.min_len = e.min_len;
      n.max_len = e.max_len;
      n.min = e.min_len ? n.children.size() : e.min;
      n.max = e.max_len ? n.children.size() : e.max;
      if (n.min > n.max)
        throw BiasError("choice block " + std::to_string(n.min) + "-" + std::to_string(n.max) +
                        ": min exceeds max");
      if (n.min > n.children.size())
        throw BiasError("choice block requires " + std::to_string(n.min) + " of " +
                        std::to_string(n.children.size()) + " children");
      return id;
    }
    Node& n = nodes_[id];
    n.predicate = e.predicate;
    for (const auto& a : e.args) {
      ArgSlot slot;
      if (a.is_choice) {
        if (a.options.size() > 64) throw BiasError("inline choice with more than 64 options");
        Inline ic;
        ic.options = a.options;
        ic.min_len = a.min_len;
        ic.max_len = a.max_len;
        ic.min = a.min_len ? a.options.size() : a.min;
        ic.max = a.max_len ? a.options.size() : a.max;
        if (ic.min > ic.max)
          throw BiasError("inline choice " + std::to_string(ic.min) + "-" + std::to_string(ic.max) +
                          ": min exceeds max");
        if (ic.min > ic.options.size())
          throw BiasError("inline choice requires more options than listed");
        slot.is_inline = true;
        slot.inline_id = inlines_.size();
        n.inlines.push_back(inlines_.size());
        inlines_.push_back(std::move(ic));
      } else {
        slot.term = a.term;
      }
      n.args.push_back(slot);
    }
    return id;
  }

  static std::string bound_text(std::size_t v, bool is_len) {
    return is_len ? "len" : std::to_string(v);
  }

  void print(std::size_t id, int depth, std::string& out) const {
    const Node& n = nodes_[id];
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (!n.is_choice) {
      out += pad + literal_text(n);
      return;
    }
    out += pad + bound_text(n.min, n.min_len) + "-" + bound_text(n.max, n.max_len) + ":[";
    if (n.children.empty()) {
      out += "]";
      return;
    }
    out += "\n";
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      print(n.children[i], depth + 1, out);
      out += i + 1 < n.children.size() ? ",\n" : "\n";
    }
    out += pad + "]";
  }

  std::string literal_text(const Node& n) const {
    std::string out = n.predicate.name();
    if (n.args.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (i) out += ",";
      const ArgSlot& a = n.args[i];
      if (!a.is_inline) {
        out += a.term.name();
        continue;
      }
      const Inline& ic = inlines_[a.inline_id];
      out += bound_text(ic.min, ic.min_len) + "-" + bound_text(ic.max, ic.max_len) + ":[";
      for (std::size_t k = 0; k < ic.options.size(); ++k) {
        if (k) out += ",";
        out += ic.options[k].name();
      }
      out += "]";
    }
    return out + ")";
  }

  std::uint64_t count_node(std::size_t id, bool& sat) const {
    const Node& n = nodes_[id];
    if (!n.is_choice) {
      std::uint64_t total = 1;
      for (auto in : n.inlines) {
        const Inline& ic = inlines_[in];
        std::uint64_t ways = 0;
        for (std::size_t k = ic.min; k <= ic.max; ++k) ways = detail::sat_add(ways, binomial(ic.options.size(), k, sat), sat);
        total = detail::sat_mul(total, ways, sat);
      }
      return total;
    }
    // elementary symmetric sums up to degree max
    std::vector<std::uint64_t> e(n.max + 1, 0);
    e[0] = 1;
    std::size_t seen = 0;
    for (auto c : n.children) {
      std::uint64_t cc = count_node(c, sat);
      ++seen;
      for (std::size_t k = std::min(seen, n.max); k >= 1; --k)
        e[k] = detail::sat_add(e[k], detail::sat_mul(e[k - 1], cc, sat), sat);
    }
    std::uint64_t total = 0;
    for (std::size_t k = n.min; k <= n.max; ++k) total = detail::sat_add(total, e[k], sat);
    return total;
  }

  static std::uint64_t binomial(std::size_t n, std::size_t k, bool& sat) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      r = r * (n - k + i) / i;  // exact: r holds C(n-k+i, i)
      if (r > std::numeric_limits<std::uint64_t>::max()) {
        sat = true;
        return std::numeric_limits<std::uint64_t>::max();
      }
    }
    return static_cast<std::uint64_t>(r);
  }

  void mark_reached(std::size_t id, const Selection& s, std::vector<char>& r) const {
    r[id] = 1;
    const Node& n = nodes_[id];
    if (!n.is_choice) return;
    for (std::size_t i = 0; i < n.children.size(); ++i)
      if (s.choice_mask[id] >> i & 1) mark_reached(n.children[i], s, r);
  }

  void collect(std::size_t id, const Selection& s, std::vector<Literal>& out) const {
    const Node& n = nodes_[id];
    if (n.is_choice) {
      for (std::size_t i = 0; i < n.children.size(); ++i)
        if (s.choice_mask[id] >> i & 1) collect(n.children[i], s, out);
      return;
    }
    Literal l;
    l.predicate = n.predicate;
    for (const auto& a : n.args) {
      if (!a.is_inline) {
        l.args.push_back(a.term);
        continue;
      }
      const Inline& ic = inlines_[a.inline_id];
      for (std::size_t k = 0; k < ic.options.size(); ++k)
        if (s.inline_mask[a.inline_id] >> k & 1) l.args.push_back(ic.options[k]);
    }
    out.push_back(std::move(l));
  }

  std::size_t literal_count(std::size_t id, const Selection& s) const {
    const Node& n = nodes_[id];
    if (!n.is_choice) return 1;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n.children.size(); ++i)
      if (s.choice_mask[id] >> i & 1) total += literal_count(n.children[i], s);
    return total;
  }

  void clear_subtree(std::size_t id, Selection& s) const {
    const Node& n = nodes_[id];
    if (n.is_choice) {
      s.choice_mask[id] = 0;
      for (auto c : n.children) clear_subtree(c, s);
    } else {
      for (auto in : n.inlines) s.inline_mask[in] = 0;
    }
  }

  // -- enumeration --

  using Cont = std::function<void(Selection&)>;

  void gen(std::size_t id, Selection& s, const Cont& k) const {
    const Node& n = nodes_[id];
    if (!n.is_choice) {
      gen_inline(n, 0, s, k);
      return;
    }
    detail::for_each_subset(n.children.size(), n.min, n.max, [&](std::uint64_t mask) {
      s.choice_mask[id] = mask;
      std::vector<std::size_t> chosen;
      for (std::size_t i = 0; i < n.children.size(); ++i)
        if (mask >> i & 1) chosen.push_back(n.children[i]);
      gen_list(chosen, 0, s, k);
      s.choice_mask[id] = 0;
    });
  }

  void gen_list(const std::vector<std::size_t>& ids, std::size_t i, Selection& s, const Cont& k) const {
    if (i == ids.size()) {
      k(s);
      return;
    }
    gen(ids[i], s, [&](Selection& x) { gen_list(ids, i + 1, x, k); });
  }

  void gen_inline(const Node& n, std::size_t i, Selection& s, const Cont& k) const {
    if (i == n.inlines.size()) {
      k(s);
      return;
    }
    std::size_t in = n.inlines[i];
    const Inline& ic = inlines_[in];
    detail::for_each_subset(ic.options.size(), ic.min, ic.max, [&](std::uint64_t mask) {
      s.inline_mask[in] = mask;
      gen_inline(n, i + 1, s, k);
      s.inline_mask[in] = 0;
    });
  }

  // -- membership --

  // Whether some instantiation of terminal `id` equals `l`.
  bool literal_fits(std::size_t id, const Literal& l) const {
    const Node& n = nodes_[id];
    if (n.predicate != l.predicate) return false;
    return fit_args(n, 0, l, 0);
  }

  bool fit_args(const Node& n, std::size_t slot, const Literal& l, std::size_t pos) const {
    if (slot == n.args.size()) return pos == l.args.size();
    const ArgSlot& a = n.args[slot];
    if (!a.is_inline) {
      return pos < l.args.size() && l.args[pos] == a.term && fit_args(n, slot + 1, l, pos + 1);
    }
    const Inline& ic = inlines_[a.inline_id];
    // choose k args in option order
    std::function<bool(std::size_t, std::size_t, std::size_t)> pick =
        [&](std::size_t opt, std::size_t taken, std::size_t p) -> bool {
      if (taken >= ic.min && taken <= ic.max && fit_args(n, slot + 1, l, p)) return true;
      if (taken == ic.max || p >= l.args.size()) return false;
      for (std::size_t o = opt; o < ic.options.size(); ++o)
        if (ic.options[o] == l.args[p] && pick(o + 1, taken + 1, p + 1)) return true;
      return false;
    };
    return pick(0, 0, pos);
  }

  using Remainders = std::set<std::vector<std::uint8_t>>;

  Remainders consume(std::size_t id, const Remainders& in,
                     const std::vector<std::vector<char>>& fits) const {
    const Node& n = nodes_[id];
    Remainders out;
    if (!n.is_choice) {
      for (const auto& r : in)
        for (std::size_t i = 0; i < r.size(); ++i)
          if (r[i] > 0 && fits[id][i]) {
            auto next = r;
            --next[i];
            out.insert(std::move(next));
          }
      return out;
    }
    // states[k] = remainders after choosing k children so far
    std::vector<Remainders> states(n.max + 1);
    states[0] = in;
    for (auto c : n.children) {
      for (std::size_t k = n.max; k >= 1; --k) {
        if (states[k - 1].empty()) continue;
        auto after = consume(c, states[k - 1], fits);
        states[k].insert(after.begin(), after.end());
      }
    }
    for (std::size_t k = n.min; k <= n.max; ++k) out.insert(states[k].begin(), states[k].end());
    return out;
  }

  // -- refinement --

  // Minimal valid fillings of the (currently unreached) subtree `id`.
  void min_fill(std::size_t id, const Selection& base, std::vector<Selection>& out) const {
    const Node& n = nodes_[id];
    if (!n.is_choice) {
      Selection s = base;
      gen_inline(n, 0, s, [&](Selection& x) { out.push_back(x); });
      return;
    }
    detail::for_each_subset(n.children.size(), n.min, n.min, [&](std::uint64_t mask) {
      Selection s = base;
      s.choice_mask[id] = mask;
      std::vector<Selection> cur{s};
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (!(mask >> i & 1)) continue;
        std::vector<Selection> next;
        for (const auto& x : cur) min_fill(n.children[i], x, next);
        cur = std::move(next);
      }
      out.insert(out.end(), cur.begin(), cur.end());
    });
  }

  // Minimal valid fillings of subtree `id` that contain at least one literal.
  void lit_fill(std::size_t id, const Selection& base, std::vector<Selection>& out) const {
    const Node& n = nodes_[id];
    if (!n.is_choice) {
      min_fill(id, base, out);
      return;
    }
    std::vector<Selection> minimal;
    min_fill(id, base, minimal);
    std::vector<Selection> cands;
    for (const auto& x : minimal) {
      if (literal_count(id, x) > 0) {
        cands.push_back(x);
        continue;
      }
      std::uint64_t mask = x.choice_mask[id];
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        std::size_t c = n.children[i];
        if (mask >> i & 1) {
          Selection y = x;
          clear_subtree(c, y);
          lit_fill(c, y, cands);
        } else if (static_cast<std::size_t>(std::popcount(mask)) < n.max) {
          Selection y = x;
          y.choice_mask[id] |= std::uint64_t{1} << i;
          lit_fill(c, y, cands);
        }
      }
    }
    keep_minimal(cands, out);
  }

  // Minimal strict extensions of the reached, valid subtree `id` adding a literal.
  void extend(std::size_t id, const Selection& base, std::vector<Selection>& out) const {
    const Node& n = nodes_[id];
    if (!n.is_choice) return;
    std::uint64_t mask = base.choice_mask[id];
    bool room = static_cast<std::size_t>(std::popcount(mask)) < n.max;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (mask >> i & 1) {
        extend(n.children[i], base, out);
      } else if (room) {
        Selection y = base;
        y.choice_mask[id] |= std::uint64_t{1} << i;
        lit_fill(n.children[i], y, out);
      }
    }
  }

  void keep_minimal(std::vector<Selection>& cands, std::vector<Selection>& out) const {
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (std::size_t i = 0; i < cands.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < cands.size() && !dominated; ++j)
        if (i != j && contained_in(cands[j], cands[i])) dominated = true;
      if (!dominated) out.push_back(cands[i]);
    }
  }

  std::vector<Node> nodes_;
  std::vector<Inline> inlines_;
  std::size_t root_ = 0;
};

// ---------------------------------------------------------------------------
// Parser: node := literal | BOUND '-' BOUND ':' '[' node (',' node)* ']'
// with BOUND a number or `len`. Literal arguments may be inline choices over
// terms. A top level of several comma-separated nodes is read as len-len.

namespace detail {

class DlabParser {
 public:
  explicit DlabParser(std::string_view src) : ts_(text::tokenize(src)) {}

  DlabExpr parse_top() {
    std::vector<DlabExpr> nodes;
    if (ts_.at_end()) ts_.fail("empty DLAB grammar");
    nodes.push_back(parse_node());
    while (ts_.accept(",")) {
      if (ts_.at_end()) break;  // trailing comma
      nodes.push_back(parse_node());
    }
    if (!ts_.at_end()) {
      if (ts_.peek().is("]")) ts_.fail("unbalanced ']'");
      ts_.fail("unexpected token");
    }
    if (nodes.size() == 1) return std::move(nodes[0]);
    return DlabExpr::all_of(std::move(nodes));
  }

 private:
  bool at_bound() const {
    const auto& t = ts_.peek();
    bool word = t.kind == text::TokenKind::Number || (t.kind == text::TokenKind::Identifier && t.text == "len");
    return word && ts_.peek(1).is("-");
  }

  std::pair<std::size_t, bool> parse_bound() {
    const auto& t = ts_.peek();
    if (t.kind == text::TokenKind::Identifier && t.text == "len") {
      ts_.next();
      return {0, true};
    }
    if (t.kind != text::TokenKind::Number) ts_.fail("expected a number or 'len'");
    std::size_t v = std::stoul(ts_.next().text);
    return {v, false};
  }

  DlabExpr parse_node() {
    if (at_bound()) {
      auto [lo, lo_len] = parse_bound();
      ts_.expect("-");
      auto [hi, hi_len] = parse_bound();
      ts_.expect(":");
      ts_.expect("[");
      std::vector<DlabExpr> kids;
      kids.push_back(parse_node());
      while (ts_.accept(",")) kids.push_back(parse_node());
      if (!ts_.peek().is("]")) ts_.fail("expected ']' closing choice block");
      ts_.next();
      DlabExpr e = DlabExpr::choice(lo, hi, std::move(kids));
      e.min_len = lo_len;
      e.max_len = hi_len;
      if (!lo_len && !hi_len && lo > hi)
        throw BiasError("choice block " + std::to_string(lo) + "-" + std::to_string(hi) + ": min exceeds max");
      return e;
    }
    const auto& t = ts_.peek();
    if (t.kind != text::TokenKind::Identifier || !std::islower(static_cast<unsigned char>(t.text[0])))
      ts_.fail("expected literal or choice block");
    DlabExpr e;
    e.predicate = Symbol(ts_.next().text);
    if (ts_.accept("(")) {
      do {
        e.args.push_back(parse_arg());
      } while (ts_.accept(","));
      if (!ts_.peek().is(")")) ts_.fail("expected ')' closing literal");
      ts_.next();
    }
    return e;
  }

  DlabArg parse_arg() {
    if (at_bound()) {
      DlabArg a;
      a.is_choice = true;
      auto [lo, lo_len] = parse_bound();
      ts_.expect("-");
      auto [hi, hi_len] = parse_bound();
      ts_.expect(":");
      ts_.expect("[");
      do {
        a.options.push_back(Term::parse(ts_.expect_word().text));
      } while (ts_.accept(","));
      if (!ts_.peek().is("]")) ts_.fail("expected ']' closing inline choice");
      ts_.next();
      a.min = lo;
      a.max = hi;
      a.min_len = lo_len;
      a.max_len = hi_len;
      if (!lo_len && !hi_len && lo > hi)
        throw BiasError("inline choice " + std::to_string(lo) + "-" + std::to_string(hi) + ": min exceeds max");
      return a;
    }
    return DlabArg::fixed(Term::parse(ts_.expect_word().text));
  }

  text::TokenStream ts_;
};

}  // namespace detail

inline DlabTemplate DlabTemplate::parse(std::string_view text) {
  detail::DlabParser p(text);
  return DlabTemplate(p.parse_top());
}

// ---------------------------------------------------------------------------
// Free-function surface.

inline DlabTemplate parse_dlab(std::string_view text) { return DlabTemplate::parse(text); }

inline SpaceSize count_space(const DlabTemplate& t) { return t.count(); }

// Every clause of the space, one per valid selection. Refuses (UsageError)
// when the space holds more than `limit` selections.
inline std::vector<Clause> enumerate(const DlabTemplate& t, std::uint64_t limit,
                                     const Literal& head = class_head("c")) {
  auto size = t.count();
  if (size.saturated || size.value > limit)
    throw UsageError("space of " + size.to_string() + " clauses exceeds the enumeration limit " +
                     std::to_string(limit));
  std::vector<Clause> out;
  out.reserve(size.value);
  t.for_each_selection([&](const Selection& s) { out.push_back(Clause{head, t.body(s)}); });
  return out;
}

inline bool member(const Clause& c, const DlabTemplate& t) { return t.member(c.body); }

inline std::vector<Selection> refine(const Selection& s, const DlabTemplate& t) { return t.refine(s); }

}  // namespace relic
