#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "relic/clause.hpp"
#include "relic/dataset.hpp"
#include "relic/error.hpp"
#include "relic/learner.hpp"
#include "relic/model_io.hpp"
#include "relic/saturate.hpp"
#include "relic/schema.hpp"

namespace relic {

// full: ECG (p, qrs with shape) + ABP (dias, sys with level)
// reduced: no p, no qrs shape, no dias
// split: P-wave-only source + QRS-only source without shape
// redundant: ECG + a renamed copy of it
enum class SynthMode { Full, Reduced, Split, Redundant };

inline SynthMode parse_synth_mode(const std::string& s) {
  if (s == "full") return SynthMode::Full;
  if (s == "reduced") return SynthMode::Reduced;
  if (s == "split") return SynthMode::Split;
  if (s == "redundant") return SynthMode::Redundant;
  throw UsageError("unknown synth mode '" + s + "' (full, reduced, split, redundant)");
}

inline std::string to_string(SynthMode m) {
  switch (m) {
    case SynthMode::Full: return "full";
    case SynthMode::Reduced: return "reduced";
    case SynthMode::Split: return "split";
    case SynthMode::Redundant: return "redundant";
  }
  return "?";
}

struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t perClass = 10;
  SynthMode mode = SynthMode::Full;
};

inline const std::vector<std::string>& rhythm_classes() {
  static const std::vector<std::string> c{"sr", "svt", "af", "vt", "doublet", "ves", "bige"};
  return c;
}

inline std::pair<std::string, std::string> synth_sources(SynthMode m) {
  switch (m) {
    case SynthMode::Split: return {"P", "QRS"};
    case SynthMode::Redundant: return {"ECG", "ECGB"};
    default: return {"ECG", "ABP"};
  }
}

namespace detail {

inline const std::vector<std::string> kDelays{"short", "normal", "long"};
inline const std::vector<std::string> kLevels{"low", "normal", "high"};
inline const std::vector<std::string> kShapes{"normal", "abnormal"};

inline PredicateInfo event_info(std::string name, std::string source, const std::vector<std::string>* attr) {
  PredicateInfo p{std::move(name), attr ? 2u : 1u, PredicateRole::Event, std::move(source), {}};
  if (attr) p.domains.push_back({1, *attr});
  return p;
}
inline PredicateInfo delay_info(std::string name, std::string source) {
  return {std::move(name), 3, PredicateRole::Relational, std::move(source), {{2, kDelays}}};
}

}  // namespace detail

inline PredicateSchema synth_schema(SynthMode m) {
  using namespace detail;
  PredicateSchema s;
  s.add({"suc", 2, PredicateRole::GlobalRelational, kSharedSource, {}});
  s.add({"suci", 2, PredicateRole::GlobalRelational, kSharedSource, {}});
  switch (m) {
    case SynthMode::Full:
      s.add(event_info("p", "ECG", &kShapes));
      s.add(event_info("qrs", "ECG", &kShapes));
      s.add(delay_info("rr1", "ECG"));
      s.add(delay_info("pp1", "ECG"));
      s.add(delay_info("pr1", "ECG"));
      s.add(event_info("dias", "ABP", &kLevels));
      s.add(event_info("sys", "ABP", &kLevels));
      s.add(delay_info("ss1", "ABP"));
      s.add(delay_info("ds1", "ABP"));
      s.add({"cycle_abp", 4, PredicateRole::Relational, "ABP",
             {{1, {"low", "normal", "high", "none"}}, {3, kLevels}}});
      break;
    case SynthMode::Reduced:
      s.add(event_info("qrs", "ECG", nullptr));
      s.add(delay_info("rr1", "ECG"));
      s.add(event_info("sys", "ABP", &kLevels));
      s.add(delay_info("ss1", "ABP"));
      break;
    case SynthMode::Split:
      s.add(event_info("p", "P", &kShapes));
      s.add(delay_info("pp1", "P"));
      s.add(event_info("qrs", "QRS", nullptr));
      s.add(delay_info("rr1", "QRS"));
      break;
    case SynthMode::Redundant:
      for (const std::string suffix : {"", "b"}) {
        std::string src = suffix.empty() ? "ECG" : "ECGB";
        s.add(event_info("p" + suffix, src, &kShapes));
        s.add(event_info("qrs" + suffix, src, &kShapes));
        s.add(delay_info("rr1" + suffix, src));
        s.add(delay_info("pp1" + suffix, src));
        s.add(delay_info("pr1" + suffix, src));
      }
      break;
  }
  return s;
}

inline SymbolizationConfig synth_config(SynthMode m) {
  if (m == SynthMode::Full) return SymbolizationConfig::cardiac();
  SymbolizationConfig c;
  auto beat = delay_thresholds(600, 1000);
  auto pr = delay_thresholds(120, 200);
  switch (m) {
    case SynthMode::Reduced:
      c.timing = {{"rr1", "qrs", "qrs", beat}, {"ss1", "sys", "sys", beat}};
      c.amplitude_events = {"sys"};
      break;
    case SynthMode::Split:
      c.timing = {{"rr1", "qrs", "qrs", beat}, {"pp1", "p", "p", beat}};
      break;
    case SynthMode::Redundant:
      c.timing = {{"rr1", "qrs", "qrs", beat},    {"pp1", "p", "p", beat},    {"pr1", "p", "qrs", pr},
                  {"rr1b", "qrsb", "qrsb", beat}, {"pp1b", "pb", "pb", beat}, {"pr1b", "pb", "qrsb", pr}};
      break;
    default: break;
  }
  return c;
}

namespace detail {

// Integer-only draws so output does not depend on the standard library's
// distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(rng_() % span);
  }

 private:
  std::mt19937_64 rng_;
};

enum class Beat { Sinus, Supra, Atrial, Ventricular };
enum class Gap { Short, Normal, Long };

struct BeatPlan {
  std::vector<Beat> beats;
  std::vector<Gap> gaps;  // gaps[i] precedes beats[i + 1]
  bool dissociated = false;
};

inline BeatPlan plan_for(const std::string& label) {
  using B = Beat;
  using G = Gap;
  if (label == "sr") return {{B::Sinus, B::Sinus, B::Sinus, B::Sinus, B::Sinus}, {G::Normal, G::Normal, G::Normal, G::Normal}, false};
  if (label == "svt") return {{B::Supra, B::Supra, B::Supra, B::Supra, B::Supra}, {G::Short, G::Short, G::Short, G::Short}, false};
  if (label == "af")
    return {{B::Atrial, B::Atrial, B::Atrial, B::Atrial, B::Atrial, B::Atrial},
            {G::Short, G::Long, G::Short, G::Long, G::Short}, false};
  if (label == "vt")
    return {std::vector<B>(8, B::Ventricular), std::vector<G>(7, G::Short), true};
  if (label == "doublet")
    return {{B::Sinus, B::Sinus, B::Ventricular, B::Ventricular, B::Sinus}, {G::Normal, G::Short, G::Short, G::Long}, false};
  if (label == "ves")
    return {{B::Sinus, B::Sinus, B::Ventricular, B::Sinus, B::Sinus}, {G::Normal, G::Short, G::Long, G::Normal}, false};
  if (label == "bige")
    return {{B::Sinus, B::Ventricular, B::Sinus, B::Ventricular, B::Sinus, B::Ventricular},
            {G::Short, G::Normal, G::Short, G::Normal, G::Short}, false};
  throw UsageError("unknown rhythm class '" + label + "'");
}

inline std::int64_t gap_ms(Gap g, Draw& d) {
  switch (g) {
    case Gap::Short: return d.between(420, 540);
    case Gap::Normal: return d.between(700, 880);
    case Gap::Long: return d.between(1120, 1300);
  }
  return 0;
}

struct Streams {
  std::vector<RawEvent> p, qrs, dias, sys;
};

inline Streams beat_streams(const std::string& label, int situation, std::uint64_t seed) {
  BeatPlan plan = plan_for(label);
  Draw d(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(situation) * 1000003ULL + 17);
  Streams s;
  std::int64_t t = 1000 + d.between(0, 500);
  std::vector<std::int64_t> qrs_t;
  for (std::size_t i = 0; i < plan.beats.size(); ++i) {
    if (i > 0) t += gap_ms(plan.gaps[i - 1], d);
    qrs_t.push_back(t);
    Beat b = plan.beats[i];
    bool ventricular = b == Beat::Ventricular;
    if ((b == Beat::Sinus || b == Beat::Supra) && !plan.dissociated)
      s.p.push_back({"p" + std::to_string(s.p.size() + 1), "p", t - d.between(140, 180), {"normal"}});
    s.qrs.push_back({"r" + std::to_string(i + 1), "qrs", t, {ventricular ? "abnormal" : "normal"}});
    s.dias.push_back({"d" + std::to_string(i + 1), "dias", t + d.between(40, 60), {std::to_string(d.between(78, 88))}});
    std::int64_t level = ventricular ? d.between(55, 68) : d.between(120, 132);
    s.sys.push_back({"s" + std::to_string(i + 1), "sys", t + d.between(190, 210), {std::to_string(level)}});
  }
  if (plan.dissociated) {
    // atrial activity resumes after the first three ventricular beats, at its own rate
    for (std::int64_t pt = qrs_t[2] + d.between(60, 120); pt < qrs_t.back(); pt += d.between(700, 880))
      s.p.push_back({"p" + std::to_string(s.p.size() + 1), "p", pt, {"normal"}});
  }
  return s;
}

inline Interpretation make_interp(int situation, const std::string& label, const std::string& source,
                                  std::vector<RawEvent> events) {
  Interpretation i;
  i.situation = situation;
  i.label = label;
  i.source = source;
  std::stable_sort(events.begin(), events.end(), timeline_less);
  i.raw_events = std::move(events);
  return i;
}

inline std::vector<RawEvent> concat(std::vector<RawEvent> a, const std::vector<RawEvent>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace detail

// Two aligned, saturated interpretations of one situation.
inline std::pair<Interpretation, Interpretation> generate_example(const std::string& label, int situation,
                                                                  const GeneratorConfig& cfg) {
  using namespace detail;
  auto s = beat_streams(label, situation, cfg.seed);
  auto [src1, src2] = synth_sources(cfg.mode);
  std::vector<RawEvent> a, b;
  switch (cfg.mode) {
    case SynthMode::Full:
      a = concat(s.p, s.qrs);
      b = concat(s.dias, s.sys);
      break;
    case SynthMode::Reduced:
      for (auto& e : s.qrs) e.attrs.clear();
      a = s.qrs;
      b = s.sys;
      break;
    case SynthMode::Split:
      for (auto& e : s.qrs) e.attrs.clear();
      a = s.p;
      b = s.qrs;
      break;
    case SynthMode::Redundant:
      a = concat(s.p, s.qrs);
      for (auto e : a) {
        e.id = "b" + e.id;
        e.predicate += "b";
        b.push_back(std::move(e));
      }
      break;
  }
  auto schema = synth_schema(cfg.mode);
  auto config = synth_config(cfg.mode);
  return {saturate(make_interp(situation, label, src1, std::move(a)), config, &schema),
          saturate(make_interp(situation, label, src2, std::move(b)), config, &schema)};
}

// perClass examples of each class; situation ids 1.. in class order.
inline Dataset generate_dataset(const GeneratorConfig& cfg) {
  Dataset data(synth_schema(cfg.mode), synth_config(cfg.mode), rhythm_classes());
  int k = 0;
  for (const auto& label : rhythm_classes())
    for (std::size_t i = 0; i < cfg.perClass; ++i) {
      auto [a, b] = generate_example(label, ++k, cfg);
      data.add(std::move(a));
      data.add(std::move(b));
    }
  return data;
}

// Hand-written rules each class of the full mode is built to satisfy: per
// class one ECG rule then one ABP rule.
inline Theory target_rules() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> rules{
      {"sr",
       {"class(sr) :- qrs(R0,normal), qrs(R1,normal), suc(R1,R0), rr1(R0,R1,normal), qrs(R2,normal), suc(R2,R1), rr1(R1,R2,normal).",
        "class(sr) :- sys(S0,high), sys(S1,high), suc(S1,S0), ss1(S0,S1,normal), sys(S2,high), suc(S2,S1), ss1(S1,S2,normal)."}},
      {"svt",
       {"class(svt) :- qrs(R0,normal), qrs(R1,normal), suc(R1,R0), rr1(R0,R1,short), qrs(R2,normal), suc(R2,R1), rr1(R1,R2,short).",
        "class(svt) :- sys(S0,high), sys(S1,high), suc(S1,S0), ss1(S0,S1,short), sys(S2,high), suc(S2,S1), ss1(S1,S2,short)."}},
      {"af",
       {"class(af) :- qrs(R0,normal), qrs(R1,normal), suc(R1,R0), rr1(R0,R1,long).",
        "class(af) :- sys(S0,high), sys(S1,high), suc(S1,S0), ss1(S0,S1,long)."}},
      {"vt",
       {"class(vt) :- qrs(R0,abnormal), qrs(R1,abnormal), suc(R1,R0), rr1(R0,R1,short), qrs(R2,abnormal), suc(R2,R1), rr1(R1,R2,short).",
        "class(vt) :- sys(S0,low), sys(S1,low), suc(S1,S0), ss1(S0,S1,short), sys(S2,low), suc(S2,S1), ss1(S1,S2,short)."}},
      {"doublet",
       {"class(doublet) :- qrs(R0,normal), qrs(R1,abnormal), suc(R1,R0), rr1(R0,R1,short), qrs(R2,abnormal), suc(R2,R1), rr1(R1,R2,short).",
        "class(doublet) :- sys(S0,high), sys(S1,low), suc(S1,S0), ss1(S0,S1,short), sys(S2,low), suc(S2,S1), ss1(S1,S2,short)."}},
      {"ves",
       {"class(ves) :- qrs(R0,normal), qrs(R1,abnormal), suc(R1,R0), rr1(R0,R1,short), qrs(R2,normal), suc(R2,R1), rr1(R1,R2,long).",
        "class(ves) :- sys(S0,high), sys(S1,low), suc(S1,S0), ss1(S0,S1,short), sys(S2,high), suc(S2,S1), ss1(S1,S2,long)."}},
      {"bige",
       {"class(bige) :- qrs(R0,abnormal), qrs(R1,normal), suc(R1,R0), rr1(R0,R1,normal).",
        "class(bige) :- sys(S0,low), sys(S1,high), suc(S1,S0), ss1(S0,S1,normal)."}},
  };
  Theory t;
  for (const auto& [label, texts] : rules)
    for (const auto& src : texts) t.classes[label].clauses.push_back(parse_clause(src));
  return t;
}

}  // namespace relic
