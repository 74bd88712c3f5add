#pragma once

// Dataset directories and report files. Needs nlohmann/json (vendor/json.hpp).

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "relic/dataset.hpp"
#include "relic/error.hpp"
#include "relic/eval.hpp"
#include "relic/model_io.hpp"

namespace relic {

namespace fs = std::filesystem;
using json = nlohmann::json;

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw UsageError("cannot write " + p.string());
  out << text;
}

inline json to_json(const Thresholds& t) {
  return {{"low", t.low}, {"high", t.high}, {"below", t.below}, {"inside", t.inside}, {"above", t.above}};
}
inline Thresholds thresholds_from_json(const json& j) {
  return {j.at("low").get<std::int64_t>(), j.at("high").get<std::int64_t>(), j.at("below").get<std::string>(),
          j.at("inside").get<std::string>(), j.at("above").get<std::string>()};
}

inline json to_json(const PredicateSchema& s) {
  json out = json::array();
  for (const auto* p : s.predicates()) {
    json d = json::array();
    for (const auto& [pos, values] : p->domains) d.push_back({{"position", pos}, {"values", values}});
    out.push_back({{"name", p->name}, {"arity", p->arity}, {"role", to_string(p->role)}, {"source", p->source}, {"domains", d}});
  }
  return out;
}
inline PredicateSchema schema_from_json(const json& j) {
  PredicateSchema s;
  for (const auto& p : j) {
    PredicateInfo info;
    info.name = p.at("name").get<std::string>();
    info.arity = p.at("arity").get<std::size_t>();
    info.role = parse_role(p.at("role").get<std::string>());
    info.source = p.value("source", kSharedSource);
    for (const auto& d : p.value("domains", json::array()))
      info.domains.push_back({d.at("position").get<std::size_t>(), d.at("values").get<std::vector<std::string>>()});
    s.add(std::move(info));
  }
  return s;
}

inline json to_json(const SymbolizationConfig& c) {
  json timing = json::array();
  for (const auto& t : c.timing) timing.push_back({{"name", t.name}, {"from", t.from}, {"to", t.to}, {"delay", to_json(t.delay)}});
  json out{{"timing", timing},
           {"amplitude_events", c.amplitude_events},
           {"amplitude", to_json(c.amplitude)},
           {"suc_window", c.suc_window},
           {"cycle", nullptr}};
  if (c.cycle)
    out["cycle"] = {{"name", c.cycle->name}, {"first", c.cycle->first}, {"second", c.cycle->second}, {"pulse", to_json(c.cycle->pulse)}};
  return out;
}
inline SymbolizationConfig config_from_json(const json& j) {
  SymbolizationConfig c;
  for (const auto& t : j.at("timing"))
    c.timing.push_back({t.at("name").get<std::string>(), t.at("from").get<std::string>(), t.at("to").get<std::string>(),
                        thresholds_from_json(t.at("delay"))});
  c.amplitude_events = j.at("amplitude_events").get<std::set<std::string>>();
  c.amplitude = thresholds_from_json(j.at("amplitude"));
  c.suc_window = j.at("suc_window").get<std::size_t>();
  if (!j.at("cycle").is_null()) {
    const auto& y = j.at("cycle");
    c.cycle = CycleRule{y.at("name").get<std::string>(), y.at("first").get<std::string>(), y.at("second").get<std::string>(),
                        thresholds_from_json(y.at("pulse"))};
  }
  c.validate();
  return c;
}

// <dir>/dataset.json plus one fact file per source.
inline void save_dataset(const fs::path& dir, const Dataset& data) {
  json sources = json::object();
  for (const auto& s : data.sources()) {
    std::string file = s + ".facts";
    write_file(dir / file, write_model_file(data.examples(s)));
    sources[s] = file;
  }
  json manifest{{"classes", data.classes()}, {"sources", sources}, {"schema", to_json(data.schema())},
                {"config", to_json(data.config())}};
  write_file(dir / "dataset.json", manifest.dump(2) + "\n");
}

inline Dataset load_dataset(const fs::path& dir) {
  json m;
  try {
    m = json::parse(read_file(dir / "dataset.json"));
  } catch (const json::exception& e) {
    throw FormatError((dir / "dataset.json").string() + ": " + e.what());
  }
  try {
    Dataset data(schema_from_json(m.at("schema")), config_from_json(m.at("config")),
                 m.at("classes").get<std::vector<std::string>>());
    for (const auto& [source, file] : m.at("sources").items()) {
      for (auto& interp : parse_model_file(read_file(dir / file.get<std::string>()))) {
        if (interp.source != source)
          throw FormatError(file.get<std::string>() + ": example " + interp.identifier() + " is not from source " + source);
        data.add(std::move(interp));
      }
    }
    return data;
  } catch (const json::exception& e) {
    throw FormatError((dir / "dataset.json").string() + ": " + e.what());
  }
}

inline json to_json(const EvaluationReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"class", row.label}, {"nodes", row.nodes}, {"timeMs", row.timeMs}, {"trAcc", row.trAcc},
                    {"acc", row.acc}, {"comp", row.comp}, {"folds", row.folds}});
  return {{"mode", r.mode}, {"seed", r.seed}, {"folds", r.folds}, {"foldAlignment", r.foldAlignment},
          {"notes", r.notes}, {"rows", rows}};
}

inline EvaluationReport report_from_json(const json& j) {
  EvaluationReport r;
  try {
    r.mode = j.at("mode").get<std::string>();
    r.seed = j.value("seed", std::uint64_t{0});
    r.folds = j.at("folds").get<std::size_t>();
    r.foldAlignment = j.value("foldAlignment", true);
    r.notes = j.value("notes", std::vector<std::string>{});
    for (const auto& row : j.at("rows"))
      r.rows.push_back({row.at("class").get<std::string>(), row.at("nodes").get<double>(), row.at("timeMs").get<double>(),
                        row.at("trAcc").get<double>(), row.at("acc").get<double>(), row.at("comp").get<std::string>(),
                        row.value("folds", std::size_t{0})});
  } catch (const json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
  return r;
}

}  // namespace relic
