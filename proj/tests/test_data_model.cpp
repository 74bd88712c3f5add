#include <gtest/gtest.h>

#include <random>

#include "relic/relic.hpp"

using namespace relic;

namespace {

const char* kSituation3 =
    "begin(model).\ndoublet_3_I.\np(p7,4905,normal).\nqrs(r7,5026,normal).\nsuc(r7,p7).\n"
    "qrs(r8,5638,abnormal).\nsuc(r8,r7).\nqrs(r9,6448,abnormal).\nsuc(r9,r8).\nend(model).\n"
    "begin(model). rs_3_ABP. dias(pd4,3406,80). suc(pd4,ps3). sys(ps4,3558,120). suc(ps4,pd4). end(model).";

std::size_t count_pred(const FactSet& f, const std::string& pred) {
  std::size_t n = 0;
  for (const auto& a : f.atoms()) n += a.predicate.name() == pred;
  return n;
}

Interpretation timeline(std::vector<RawEvent> evs) {
  Interpretation i;
  i.situation = 1;
  i.source = "I";
  i.label = "x";
  std::sort(evs.begin(), evs.end(), timeline_less);
  i.raw_events = std::move(evs);
  return i;
}

Interpretation random_timeline(std::mt19937& rng, std::size_t n) {
  std::vector<RawEvent> evs;
  std::set<std::int64_t> times;
  const char* shapes[] = {"normal", "abnormal"};
  for (std::size_t k = 0; k < n; ++k) {
    std::int64_t t;
    do t = static_cast<std::int64_t>(rng() % 20000); while (!times.insert(t).second);
    bool is_p = rng() % 3 == 0;
    evs.push_back({(is_p ? "p" : "r") + std::to_string(k), is_p ? "p" : "qrs", t, {shapes[rng() % 2]}});
  }
  return timeline(std::move(evs));
}

}  // namespace

TEST(ModelFile, ParsesReferenceBlocks) {
  auto xs = parse_model_file(kSituation3);
  ASSERT_EQ(xs.size(), 2u);
  const auto& ecg = xs[0];
  EXPECT_EQ(ecg.label, "doublet");
  EXPECT_EQ(ecg.situation, 3);
  EXPECT_EQ(ecg.source, "I");
  auto stored = ecg.stored_facts();
  EXPECT_EQ(stored.size(), 7u);
  EXPECT_NE(std::find(stored.begin(), stored.end(), parse_literal("qrs(r8,5638,abnormal)")), stored.end());
  ASSERT_EQ(ecg.raw_events.size(), 4u);
  EXPECT_EQ(ecg.raw_events[0].id, "p7");
  EXPECT_EQ(ecg.raw_events[3].time, 6448);

  const auto& abp = xs[1];
  EXPECT_EQ(abp.label, "rs");
  EXPECT_EQ(abp.situation, 3);
  EXPECT_EQ(abp.source, "ABP");
  stored = abp.stored_facts();
  EXPECT_EQ(stored.size(), 4u);
  EXPECT_NE(std::find(stored.begin(), stored.end(), parse_literal("sys(ps4,3558,120)")), stored.end());

  EXPECT_TRUE(parse_model_file("").empty());
  EXPECT_TRUE(parse_model_file("% only a comment\n").empty());
}

TEST(ModelFile, Errors) {
  try {
    parse_model_file("begin(model).\nsr_1_I.\np(p1,10,normal).\n");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("end(model)"), std::string::npos);
  }
  EXPECT_THROW(parse_model_file("begin(model).\nsr_I.\nend(model).\n"), FormatError);
  EXPECT_THROW(parse_model_file("begin(model).\nsr_x_I.\nend(model).\n"), FormatError);
  EXPECT_THROW(parse_model_file("begin(model).\nsr_1_I.\np(P1,10,normal).\nend(model).\n"), FormatError);
  EXPECT_THROW(parse_model_file("begin(model).\nsr_1_I.\np(p1,10,normal).\np(p1,20,normal).\nend(model).\n"),
               FormatError);
  EXPECT_THROW(parse_model_file("begin(model).\nsr_1_I.\np(p1,10,normal)\nend(model).\n"), ParseError);
}

TEST(ModelFile, WriteRoundTrip) {
  auto xs = parse_model_file(kSituation3);
  EXPECT_EQ(parse_model_file(write_model_file({xs[0]})), std::vector<Interpretation>{xs[0]});
  EXPECT_EQ(write_model_file({}), "");
  auto text = write_model_file(xs);
  EXPECT_LT(text.find("doublet_3_I."), text.find("rs_3_ABP."));
  EXPECT_EQ(parse_model_file(text), xs);
  EXPECT_NE(text.find("qrs(r8,5638,abnormal).\n"), std::string::npos);
}

TEST(ModelFile, RoundTripOnGeneratorOutput) {
  for (auto mode : {SynthMode::Full, SynthMode::Split, SynthMode::Redundant}) {
    GeneratorConfig cfg;
    cfg.seed = 3;
    cfg.perClass = 2;
    cfg.mode = mode;
    auto data = generate_dataset(cfg);
    for (const auto& src : data.sources()) {
      const auto& xs = data.examples(src);
      EXPECT_EQ(parse_model_file(write_model_file(xs)), xs);
      auto sat = data.saturated().examples(src);
      EXPECT_EQ(parse_model_file(write_model_file(sat)), sat);
    }
  }
}

TEST(Saturate, RrCategory) {
  auto i = timeline({{"r1", "qrs", 1000, {"normal"}}, {"r2", "qrs", 1400, {"normal"}}});
  auto s = saturate(i, SymbolizationConfig::cardiac());
  EXPECT_TRUE(s.facts.contains(parse_literal("rr1(r1,r2,short)")));
  EXPECT_TRUE(s.facts.contains(parse_literal("qrs(r1,normal)")));
  EXPECT_TRUE(s.facts.contains(parse_literal("suc(r2,r1)")));
  EXPECT_TRUE(s.facts.contains(parse_literal("suci(r2,r1)")));
  EXPECT_FALSE(s.facts.contains(parse_literal("suc(r1,r2)")));
}

TEST(Saturate, SingleEvent) {
  auto s = saturate(timeline({{"r1", "qrs", 1000, {"normal"}}}), SymbolizationConfig::cardiac());
  ASSERT_EQ(s.facts.size(), 1u);
  EXPECT_TRUE(s.facts.contains(parse_literal("qrs(r1,normal)")));
}

TEST(Saturate, PressureBlock) {
  auto abp = parse_model_file(kSituation3)[1];
  auto s = saturate(abp, SymbolizationConfig::cardiac());
  EXPECT_TRUE(s.facts.contains(parse_literal("suc(ps4,pd4)")));
  EXPECT_TRUE(s.facts.contains(parse_literal("suci(ps4,pd4)")));
  // stored suc to an event outside the block is not derivable
  EXPECT_FALSE(s.facts.contains(parse_literal("suc(pd4,ps3)")));
  // 120 - 80 = 40 mmHg pulse, inside [30, 60]; no earlier systole
  EXPECT_TRUE(s.facts.contains(parse_literal("cycle_abp(pd4,none,ps4,normal)")));
  EXPECT_TRUE(s.facts.contains(parse_literal("dias(pd4,normal)")));
  EXPECT_TRUE(s.facts.contains(parse_literal("sys(ps4,high)")));
  // 3558 - 3406 = 152 ms
  EXPECT_TRUE(s.facts.contains(parse_literal("ds1(pd4,ps4,normal)")));
}

TEST(Saturate, DoubletBlockCounts) {
  auto s = saturate(parse_model_file(kSituation3)[0], SymbolizationConfig::cardiac());
  EXPECT_EQ(count_pred(s.facts, "suci"), 3u);
  EXPECT_EQ(count_pred(s.facts, "suc"), 6u);
  EXPECT_TRUE(s.facts.contains(parse_literal("pr1(p7,r7,normal)")));   // 121 ms
  EXPECT_TRUE(s.facts.contains(parse_literal("rr1(r7,r8,normal)")));   // 612
  EXPECT_TRUE(s.facts.contains(parse_literal("rr1(r8,r9,normal)")));   // 810
}

TEST(Saturate, UnsortedTimelineIsInternalError) {
  Interpretation i;
  i.raw_events = {{"r2", "qrs", 2000, {"normal"}}, {"r1", "qrs", 1000, {"normal"}}};
  EXPECT_THROW(saturate(i, SymbolizationConfig::cardiac()), InternalError);
}

TEST(Saturate, PropertiesOnRandomTimelines) {
  std::mt19937 rng(31);
  auto cfg = SymbolizationConfig::cardiac();
  for (int round = 0; round < 300; ++round) {
    std::size_t n = 1 + rng() % 14;
    auto in = random_timeline(rng, n);
    auto s = saturate(in, cfg);
    const auto& tl = in.raw_events;

    EXPECT_EQ(saturate(s, cfg), s);        // idempotent
    EXPECT_EQ(saturate(in, cfg), s);       // deterministic
    EXPECT_EQ(count_pred(s.facts, "suci"), n - 1);

    // suc: later event first, at most suc_window positions apart
    std::size_t suc = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        bool want = a > b && a - b <= cfg.suc_window;
        Literal l("suc", {Term::constant(tl[a].id), Term::constant(tl[b].id)});
        EXPECT_EQ(s.facts.contains(l), want);
        suc += want;
        Literal li("suci", {Term::constant(tl[a].id), Term::constant(tl[b].id)});
        EXPECT_EQ(s.facts.contains(li), a == b + 1);
        if (s.facts.contains(li)) EXPECT_TRUE(s.facts.contains(l));
      }
    EXPECT_EQ(count_pred(s.facts, "suc"), suc);

    // rr1 between consecutive qrs
    std::vector<const RawEvent*> qrs;
    for (const auto& e : tl)
      if (e.predicate == "qrs") qrs.push_back(&e);
    EXPECT_EQ(count_pred(s.facts, "rr1"), qrs.empty() ? 0 : qrs.size() - 1);
    for (std::size_t k = 1; k < qrs.size(); ++k) {
      auto d = qrs[k]->time - qrs[k - 1]->time;
      std::string cat = d < 600 ? "short" : d > 1000 ? "long" : "normal";
      EXPECT_TRUE(s.facts.contains(Literal("rr1", {Term::constant(qrs[k - 1]->id), Term::constant(qrs[k]->id),
                                                   Term::constant(cat)})));
    }
  }
}

TEST(Consistency, Labels) {
  Interpretation a, b, c;
  a.situation = b.situation = 3;
  c.situation = 4;
  a.label = b.label = "doublet";
  EXPECT_TRUE(check_consistency(a, b));
  b.label = "sr";
  EXPECT_FALSE(check_consistency(a, b));
  EXPECT_THROW(check_consistency(a, c), UsageError);
  auto xs = parse_model_file(kSituation3);
  EXPECT_FALSE(check_consistency(xs[0], xs[1]));
}

TEST(Dataset, OnePerSourceAndSituation) {
  Dataset d;
  auto xs = parse_model_file(kSituation3);
  d.add(xs[0]);
  d.add(xs[1]);
  EXPECT_THROW(d.add(xs[0]), UsageError);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.situations(), std::vector<int>{3});
  EXPECT_EQ(d.sources(), (std::vector<std::string>{"ABP", "I"}));
  EXPECT_NE(d.find("I", 3), nullptr);
  EXPECT_EQ(d.find("I", 4), nullptr);
  EXPECT_EQ(d.subset({}).size(), 0u);
}

TEST(Config, ThresholdsMustIncrease) {
  auto cfg = SymbolizationConfig::cardiac();
  cfg.validate();
  cfg.timing[0].delay = delay_thresholds(1000, 600);
  EXPECT_THROW(cfg.validate(), UsageError);
  Thresholds t = delay_thresholds(600, 1000);
  EXPECT_EQ(t.categorize(599), "short");
  EXPECT_EQ(t.categorize(600), "normal");
  EXPECT_EQ(t.categorize(1000), "normal");
  EXPECT_EQ(t.categorize(1001), "long");
}
