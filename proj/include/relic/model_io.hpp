#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "relic/clause.hpp"
#include "relic/error.hpp"
#include "relic/facts.hpp"
#include "relic/lexer.hpp"

namespace relic {

// One timestamped event as stored in a fact file: pred(id, time, attrs...).
struct RawEvent {
  std::string id;
  std::string predicate;
  std::int64_t time = 0;
  std::vector<std::string> attrs;

  Literal as_fact() const {
    std::vector<Term> args{Term::constant(id), Term::constant(std::to_string(time))};
    for (const auto& a : attrs) args.push_back(Term::constant(a));
    return Literal(predicate, std::move(args));
  }

  friend bool operator==(const RawEvent&, const RawEvent&) = default;
};

// Timeline order: timestamp, then event id.
inline bool timeline_less(const RawEvent& a, const RawEvent& b) {
  if (a.time != b.time) return a.time < b.time;
  return a.id < b.id;
}

// One labelled example of one source for one situation.
struct Interpretation {
  int situation = 0;
  std::string source;
  std::string label;
  FactSet facts;                     // non-event facts (saturated after saturate())
  std::vector<RawEvent> raw_events;  // timeline order

  std::string identifier() const {
    return label + "_" + std::to_string(situation) + "_" + source;
  }

  // Every fact in its stored form: raw events first, then the fact set.
  std::vector<Literal> stored_facts() const {
    std::vector<Literal> out;
    for (const auto& e : raw_events) out.push_back(e.as_fact());
    out.insert(out.end(), facts.atoms().begin(), facts.atoms().end());
    return out;
  }

  friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

namespace detail {

inline bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// A stored fact carries a timestamp when its second argument is an integer
// and its first is an event id.
inline bool is_raw_event(const Literal& l) {
  return l.args.size() >= 2 && !is_integer(l.args[0].name()) && is_integer(l.args[1].name());
}

inline void parse_identifier(const std::string& ident, Interpretation& out, std::size_t line) {
  auto last = ident.rfind('_');
  if (last == std::string::npos || last == 0 || last + 1 == ident.size())
    throw FormatError("line " + std::to_string(line) + ": identifier '" + ident +
                      "' does not match <class>_<situation>_<source>");
  auto mid = ident.rfind('_', last - 1);
  if (mid == std::string::npos || mid == 0)
    throw FormatError("line " + std::to_string(line) + ": identifier '" + ident +
                      "' does not match <class>_<situation>_<source>");
  std::string situation = ident.substr(mid + 1, last - mid - 1);
  if (!is_integer(situation))
    throw FormatError("line " + std::to_string(line) + ": situation '" + situation +
                      "' in identifier '" + ident + "' is not an integer");
  out.label = ident.substr(0, mid);
  out.situation = std::stoi(situation);
  out.source = ident.substr(last + 1);
}

}  // namespace detail

// Parses `begin(model). <ident>. <fact>. ... end(model).` blocks.
inline std::vector<Interpretation> parse_model_file(std::string_view src) {
  text::TokenStream ts(text::tokenize(src));
  std::vector<Interpretation> out;
  auto is_marker = [](const Literal& l, const char* name) {
    return l.predicate.name() == name && l.args.size() == 1 && l.args[0].name() == "model";
  };
  while (!ts.at_end()) {
    std::size_t begin_line = ts.peek().line;
    Literal begin = text::parse_literal(ts);
    if (!is_marker(begin, "begin")) throw ParseError("expected begin(model).", begin_line);
    ts.expect(".");

    Interpretation interp;
    const text::Token& ident = ts.peek();
    if (ident.kind != text::TokenKind::Identifier) ts.fail("expected example identifier");
    std::size_t ident_line = ident.line;
    std::string ident_text = ts.next().text;
    detail::parse_identifier(ident_text, interp, ident_line);
    ts.expect(".");

    std::vector<Literal> plain;
    std::set<std::string> ids;
    bool closed = false;
    while (!ts.at_end()) {
      std::size_t line = ts.peek().line;
      Literal fact = text::parse_literal(ts);
      if (is_marker(fact, "end")) {
        ts.expect(".");
        closed = true;
        break;
      }
      if (is_marker(fact, "begin"))
        throw ParseError("missing end(model). for block " + ident_text, begin_line);
      if (!ts.peek().is(".")) ts.fail("expected '.' after fact");
      ts.next();
      if (!fact.is_ground())
        throw FormatError("line " + std::to_string(line) + ": non-ground fact " + to_string(fact));
      if (detail::is_raw_event(fact)) {
        RawEvent ev;
        ev.id = fact.args[0].name();
        ev.predicate = fact.predicate.name();
        ev.time = std::stoll(fact.args[1].name());
        for (std::size_t k = 2; k < fact.args.size(); ++k) ev.attrs.push_back(fact.args[k].name());
        if (!ids.insert(ev.id).second)
          throw FormatError("line " + std::to_string(line) + ": duplicate event id '" + ev.id + "'");
        interp.raw_events.push_back(std::move(ev));
      } else {
        plain.push_back(std::move(fact));
      }
    }
    if (!closed) throw ParseError("missing end(model). for block " + ident_text, begin_line);
    std::stable_sort(interp.raw_events.begin(), interp.raw_events.end(), timeline_less);
    interp.facts = FactSet(std::move(plain));
    out.push_back(std::move(interp));
  }
  return out;
}

inline std::string write_model_file(const std::vector<Interpretation>& interps) {
  std::string out;
  for (const auto& i : interps) {
    out += "begin(model).\n";
    out += i.identifier() + ".\n";
    for (const auto& f : i.stored_facts()) out += to_string(f) + ".\n";
    out += "end(model).\n";
  }
  return out;
}

}  // namespace relic
