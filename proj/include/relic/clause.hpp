#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "relic/error.hpp"
#include "relic/lexer.hpp"
#include "relic/symbol.hpp"

namespace relic {

// A variable (uppercase or '_' initial) or a constant (lowercase or digit initial).
class Term {
 public:
  Term() = default;

  static Term variable(std::string_view name) { return Term(Symbol(name), true); }
  static Term constant(std::string_view name) { return Term(Symbol(name), false); }
  // Classifies by the case convention.
  static Term parse(std::string_view name) {
    if (name.empty()) throw FormatError("empty term");
    return is_variable_name(name) ? variable(name) : constant(name);
  }
  static bool is_variable_name(std::string_view name) {
    unsigned char c = static_cast<unsigned char>(name.front());
    return std::isupper(c) || c == '_';
  }

  Symbol symbol() const noexcept { return symbol_; }
  const std::string& name() const { return symbol_.name(); }
  bool is_variable() const noexcept { return variable_; }
  bool is_constant() const noexcept { return !variable_; }

  friend bool operator==(const Term& a, const Term& b) noexcept {
    return a.symbol_ == b.symbol_ && a.variable_ == b.variable_;
  }

 private:
  Term(Symbol s, bool var) : symbol_(s), variable_(var) {}

  Symbol symbol_;
  bool variable_ = false;
};

struct Literal {
  Symbol predicate;
  std::vector<Term> args;

  Literal() = default;
  Literal(std::string_view pred, std::vector<Term> a)
      : predicate(pred), args(std::move(a)) {}
  Literal(Symbol pred, std::vector<Term> a) : predicate(pred), args(std::move(a)) {}

  std::size_t arity() const noexcept { return args.size(); }
  bool is_ground() const {
    return std::none_of(args.begin(), args.end(),
                        [](const Term& t) { return t.is_variable(); });
  }

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
};

inline std::string to_string(const Literal& lit) {
  std::string out = lit.predicate.name();
  if (lit.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < lit.args.size(); ++i) {
    if (i) out += ',';
    out += lit.args[i].name();
  }
  return out + ')';
}

// Orders literals by their printed form; used wherever output order must not
// depend on interning order.
struct LiteralTextLess {
  bool operator()(const Literal& a, const Literal& b) const {
    return to_string(a) < to_string(b);
  }
};

struct Clause {
  Literal head;
  std::vector<Literal> body;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.head == b.head && a.body == b.body;
  }
};

// `class(c)` head for a class label.
inline Literal class_head(std::string_view label) {
  return Literal("class", {Term::constant(label)});
}

inline std::string body_to_string(const std::vector<Literal>& body) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += to_string(body[i]);
  }
  return out;
}

inline std::string to_string(const Clause& c) {
  if (c.body.empty()) return to_string(c.head) + ".";
  return to_string(c.head) + " :- " + body_to_string(c.body) + ".";
}

// Order-insensitive text key: sorted body literal texts.
inline std::string canonical_text(const Clause& c) {
  std::vector<std::string> parts;
  parts.reserve(c.body.size());
  for (const auto& l : c.body) parts.push_back(to_string(l));
  std::sort(parts.begin(), parts.end());
  std::string out = to_string(c.head) + " :- ";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

inline std::set<std::string> variable_names(const Clause& c) {
  std::set<std::string> out;
  auto add = [&](const Literal& l) {
    for (const auto& t : l.args)
      if (t.is_variable()) out.insert(t.name());
  };
  add(c.head);
  for (const auto& l : c.body) add(l);
  return out;
}

// Finite variable -> term map.
class Substitution {
 public:
  void bind(const Term& var, const Term& value) {
    if (!var.is_variable()) throw UsageError("cannot bind constant " + var.name());
    bindings_[var.name()] = value;
  }
  const Term* lookup(const Term& var) const {
    auto it = bindings_.find(var.name());
    return it == bindings_.end() ? nullptr : &it->second;
  }
  bool empty() const noexcept { return bindings_.empty(); }
  std::size_t size() const noexcept { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const noexcept { return bindings_; }

  // Resolves chains X->Y, Y->a into X->a so that applying once is final. A
  // cycle of variables collapses onto its smallest name, which stays unbound.
  Substitution normalized() const {
    Substitution out;
    for (const auto& [name, value] : bindings_) {
      Term cur = value;
      std::vector<std::string> path{name};
      while (cur.is_variable()) {
        auto hit = std::find(path.begin(), path.end(), cur.name());
        if (hit != path.end()) {
          cur = Term::variable(*std::min_element(hit, path.end()));
          break;
        }
        auto it = bindings_.find(cur.name());
        if (it == bindings_.end()) break;
        path.push_back(cur.name());
        cur = it->second;
      }
      if (!(cur.is_variable() && cur.name() == name)) out.bindings_[name] = cur;
    }
    return out;
  }

 private:
  std::map<std::string, Term> bindings_;
};

inline Term apply_substitution(const Term& t, const Substitution& s) {
  if (!t.is_variable()) return t;
  const Term* v = s.lookup(t);
  return v ? *v : t;
}

inline Literal apply_substitution(const Literal& l, const Substitution& s) {
  Literal out = l;
  for (auto& a : out.args) a = apply_substitution(a, s);
  return out;
}

inline Clause apply_substitution(const Clause& c, const Substitution& s) {
  Clause out{apply_substitution(c.head, s), {}};
  out.body.reserve(c.body.size());
  for (const auto& l : c.body) out.body.push_back(apply_substitution(l, s));
  return out;
}

// Returns variants of the two clauses with disjoint variable names. The first
// clause is unchanged; clashing variables of the second get a `_2` suffix
// (repeated until fresh).
inline std::pair<Clause, Clause> standardize_apart(const Clause& c1, const Clause& c2) {
  auto taken = variable_names(c1);
  auto second = variable_names(c2);
  Substitution rename;
  std::set<std::string> used = taken;
  used.insert(second.begin(), second.end());
  for (const auto& v : second) {
    if (!taken.count(v)) continue;
    std::string fresh = v + "_2";
    while (used.count(fresh)) fresh += "_2";
    used.insert(fresh);
    rename.bind(Term::variable(v), Term::variable(fresh));
  }
  return {c1, apply_substitution(c2, rename)};
}

namespace text {

inline Literal parse_literal(TokenStream& ts) {
  const Token& name = ts.peek();
  if (name.kind != TokenKind::Identifier || !std::islower(static_cast<unsigned char>(name.text[0])))
    ts.fail("expected predicate name");
  ts.next();
  Literal lit;
  lit.predicate = Symbol(name.text);
  if (ts.accept("(")) {
    do {
      const Token& arg = ts.expect_word();
      lit.args.push_back(Term::parse(arg.text));
    } while (ts.accept(","));
    ts.expect(")");
  }
  return lit;
}

}  // namespace text

// Parses `head :- l1, ..., ln.` or a bare head `head.`; the final dot is optional.
inline Clause parse_clause(std::string_view src) {
  text::TokenStream ts(text::tokenize(src));
  Clause c;
  c.head = text::parse_literal(ts);
  if (ts.accept(":-")) {
    do {
      c.body.push_back(text::parse_literal(ts));
    } while (ts.accept(","));
  }
  ts.accept(".");
  if (!ts.at_end()) ts.fail("trailing input after clause");
  return c;
}

// Parses a comma-separated literal list (no head).
inline std::vector<Literal> parse_body(std::string_view src) {
  text::TokenStream ts(text::tokenize(src));
  std::vector<Literal> out;
  if (ts.at_end()) return out;
  do {
    out.push_back(text::parse_literal(ts));
  } while (ts.accept(","));
  ts.accept(".");
  if (!ts.at_end()) ts.fail("trailing input after literal list");
  return out;
}

inline Literal parse_literal(std::string_view src) {
  text::TokenStream ts(text::tokenize(src));
  Literal l = text::parse_literal(ts);
  ts.accept(".");
  if (!ts.at_end()) ts.fail("trailing input after literal");
  return l;
}

// Parses a file with one clause per `.`-terminated statement.
inline std::vector<Clause> parse_clauses(std::string_view src) {
  text::TokenStream ts(text::tokenize(src));
  std::vector<Clause> out;
  while (!ts.at_end()) {
    Clause c;
    c.head = text::parse_literal(ts);
    if (ts.accept(":-")) {
      do {
        c.body.push_back(text::parse_literal(ts));
      } while (ts.accept(","));
    }
    ts.expect(".");
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace relic

template <>
struct std::hash<relic::Term> {
  std::size_t operator()(const relic::Term& t) const noexcept {
    return t.symbol().id() * 2 + (t.is_variable() ? 1 : 0);
  }
};

template <>
struct std::hash<relic::Literal> {
  std::size_t operator()(const relic::Literal& l) const noexcept {
    std::size_t h = l.predicate.id();
    for (const auto& a : l.args) h = h * 1000003u ^ std::hash<relic::Term>{}(a);
    return h;
  }
};
