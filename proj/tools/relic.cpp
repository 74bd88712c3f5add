// relic: command-line driver for synthesis, learning, cross-validation and reports.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relic/json_io.hpp"
#include "relic/relic.hpp"

namespace {

using namespace relic;

struct LearnOpts {
  std::size_t beam = 10;
  std::size_t maxClauses = 8;
  std::size_t minPos = 1;
  double maxFp = 0.0;

  LearnerParams params() const {
    LearnerParams p;
    p.beamWidth = beam;
    p.maxClausesPerClass = maxClauses;
    p.minPositiveCoverage = minPos;
    p.maxFpFraction = maxFp;
    p.validate();
    return p;
  }
};

void add_learn_opts(CLI::App* app, LearnOpts& o) {
  app->add_option("--beam", o.beam, "beam width")->capture_default_str();
  app->add_option("--max-clauses", o.maxClauses, "clauses per class")->capture_default_str();
  app->add_option("--min-pos", o.minPos, "minimum positives covered by an accepted clause")->capture_default_str();
  app->add_option("--max-fp", o.maxFp, "accepted fraction of covered negatives")->capture_default_str();
}

// SRC=FILE pairs; sources without one get the naive monosource bias.
std::map<std::string, DlabTemplate> source_biases(const Dataset& data, const std::vector<std::string>& specs,
                                                  std::size_t mono_events) {
  std::map<std::string, DlabTemplate> out;
  for (const auto& s : specs) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--bias expects SOURCE=FILE, got '" + s + "'");
    out.emplace(s.substr(0, eq), parse_dlab(read_file(s.substr(eq + 1))));
  }
  for (const auto& src : data.sources())
    if (!out.count(src)) out.emplace(src, naive_bias(data.schema(), mono_events, src));
  return out;
}

std::vector<InterleavingConstraint> load_constraints(const std::string& file) {
  return file.empty() ? std::vector<InterleavingConstraint>{} : parse_constraints(read_file(file));
}

void print_stats(const Theory& t, std::ostream& os) {
  for (const auto& [label, ct] : t.classes)
    os << "% " << label << ": nodes " << ct.stats.nodes << ", " << detail::fixed(ct.stats.timeMs, 1) << " ms"
       << (ct.incomplete ? ", incomplete" : "") << "\n";
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relic: biased multisource relational rule learning"};
  app.require_subcommand(1);

  // synth
  GeneratorConfig gen;
  std::string synth_mode = "full", synth_out;
  auto* synth = app.add_subcommand("synth", "generate a synthetic two-source dataset");
  synth->add_option("--seed", gen.seed)->capture_default_str();
  synth->add_option("--per-class", gen.perClass)->capture_default_str();
  synth->add_option("--mode", synth_mode, "full, reduced, split or redundant")->capture_default_str();
  synth->add_option("--out", synth_out, "output directory")->required();

  // learn
  std::string data_dir, source, bias_file, out_file;
  LearnOpts lo;
  auto* learn = app.add_subcommand("learn", "learn a monosource theory");
  learn->add_option("--data", data_dir)->required();
  learn->add_option("--source", source)->required();
  learn->add_option("--bias", bias_file, "DLAB file (default: naive monosource bias)");
  learn->add_option("--out", out_file);
  add_learn_opts(learn, lo);

  // learn-naive
  std::size_t max_events = 4;
  auto* naive = app.add_subcommand("learn-naive", "learn on aggregated examples with the naive bias");
  naive->add_option("--data", data_dir)->required();
  naive->add_option("--max-events", max_events)->capture_default_str();
  naive->add_option("--out", out_file);
  add_learn_opts(naive, lo);

  // learn-biased
  std::vector<std::string> bias_specs;
  std::string constraints_file, artifacts_dir;
  std::size_t mono_events = 4;
  double mono_fp = 0.0;
  auto* biased = app.add_subcommand("learn-biased", "biased multisource learning");
  biased->add_option("--data", data_dir)->required();
  biased->add_option("--bias", bias_specs, "SOURCE=FILE monosource bias (repeatable)");
  biased->add_option("--mono-max-events", mono_events, "events in default monosource biases")->capture_default_str();
  biased->add_option("--mono-max-fp", mono_fp, "false-positive fraction accepted in monosource steps")->capture_default_str();
  biased->add_option("--constraints", constraints_file);
  biased->add_option("--artifacts", artifacts_dir, "directory for monosource theories, bottoms and biases");
  biased->add_option("--out", out_file);
  add_learn_opts(biased, lo);

  // crossval
  std::string folds = "loo", cv_mode = "biased", format = "markdown", json_out;
  auto* cv = app.add_subcommand("crossval", "cross-validation report");
  cv->add_option("--data", data_dir)->required();
  cv->add_option("--folds", folds, "fold count or 'loo'")->capture_default_str();
  cv->add_option("--mode", cv_mode, "mono:<source>, naive or biased")->capture_default_str();
  cv->add_option("--bias", bias_specs, "SOURCE=FILE monosource bias (repeatable)");
  cv->add_option("--mono-max-events", mono_events)->capture_default_str();
  cv->add_option("--mono-max-fp", mono_fp)->capture_default_str();
  cv->add_option("--max-events", max_events, "events in the naive bias")->capture_default_str();
  cv->add_option("--constraints", constraints_file);
  cv->add_option("--format", format, "csv or markdown")->capture_default_str();
  cv->add_option("--json", json_out, "also write the report as JSON");
  cv->add_option("--seed", gen.seed, "seed recorded in the report")->capture_default_str();
  add_learn_opts(cv, lo);

  // count-space
  auto* count = app.add_subcommand("count-space", "size of a DLAB search space");
  count->add_option("--bias", bias_file)->required();

  // report
  std::string report_in;
  auto* report = app.add_subcommand("report", "re-emit a JSON report");
  report->add_option("--in", report_in)->required();
  report->add_option("--format", format)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) {
      gen.mode = parse_synth_mode(synth_mode);
      auto data = generate_dataset(gen);
      save_dataset(synth_out, data);
      std::cout << "wrote " << data.size() << " interpretations of " << data.situations().size()
                << " situations to " << synth_out << "\n";
    } else if (learn->parsed()) {
      auto data = load_dataset(data_dir).saturated();
      auto bias = bias_file.empty() ? naive_bias(data.schema(), 4, source) : parse_dlab(read_file(bias_file));
      const auto& examples = data.examples(source);
      if (examples.empty()) throw UsageError("no examples for source " + source);
      auto theory = learn_theory(examples, data.classes(), bias, lo.params());
      emit(to_string(theory), out_file);
      print_stats(theory, std::cerr);
    } else if (naive->parsed()) {
      auto data = load_dataset(data_dir).saturated();
      auto agg = aggregate(data);
      auto theory = learn_theory(agg.examples, data.classes(), naive_bias(data.schema(), max_events), lo.params());
      emit(to_string(theory), out_file);
      print_stats(theory, std::cerr);
    } else if (biased->parsed()) {
      auto data = load_dataset(data_dir);
      MultisourceParams mp;
      mp.final = lo.params();
      mp.mono = mp.final;
      mp.mono.maxFpFraction = mono_fp;
      auto r = biased_multisource_learn(data, source_biases(data, bias_specs, mono_events), load_constraints(constraints_file), mp);
      if (!artifacts_dir.empty()) {
        fs::path dir = artifacts_dir;
        for (const auto& [src, t] : r.mono) write_file(dir / ("mono_" + src + ".theory"), to_string(t));
        for (const auto& [label, art] : r.artifacts) {
          std::string bottoms;
          for (const auto& b : art.bottoms) bottoms += "% merge " + b.merge.to_string() + "\n" + to_string(b.clause) + "\n";
          write_file(dir / ("bottoms_" + label + ".pl"), bottoms);
          if (art.bias) write_file(dir / ("bias_" + label + ".dlab"), art.bias->to_text());
        }
      }
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      emit(to_string(r.theory), out_file);
      print_stats(r.theory, std::cerr);
    } else if (cv->parsed()) {
      auto data = load_dataset(data_dir);
      std::size_t p = folds == "loo" ? data.situations().size() : 0;
      if (folds != "loo") {
        try {
          p = std::stoul(folds);
        } catch (...) {
          throw UsageError("--folds expects a number or 'loo'");
        }
      }
      EvalSetup setup;
      setup.biasPerSource = source_biases(data, bias_specs, mono_events);
      setup.naiveMaxEvents = max_events;
      setup.constraints = load_constraints(constraints_file);
      setup.params.final = lo.params();
      setup.params.mono = setup.params.final;
      setup.params.mono.maxFpFraction = mono_fp;
      auto rep = cross_validate(data, EvalMode::parse(cv_mode), setup, p);
      rep.seed = gen.seed;
      if (!json_out.empty()) write_file(json_out, to_json(rep).dump(2) + "\n");
      std::cout << emit_report(rep, format);
      if (!rep.foldAlignment) std::cerr << "warning: fold alignment violated\n";
    } else if (count->parsed()) {
      auto t = parse_dlab(read_file(bias_file));
      std::cout << t.count().to_string() << "\n";
    } else if (report->parsed()) {
      json j;
      try {
        j = json::parse(read_file(report_in));
      } catch (const json::exception& e) {
        throw FormatError(report_in + ": " + e.what());
      }
      std::cout << emit_report(report_from_json(j), format);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    // bad input files and biases are the caller's to fix
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
