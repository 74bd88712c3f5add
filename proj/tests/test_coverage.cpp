#include <gtest/gtest.h>

#include "oracles.hpp"
#include "relic/relic.hpp"

using namespace relic;

namespace {

// Reference doublet blocks, stored suc facts included.
const char* kDoubletBlock =
    "begin(model). doublet_3_I. p(p7,4905,normal). qrs(r7,5026,normal). suc(r7,p7). "
    "qrs(r8,5638,abnormal). suc(r8,r7). qrs(r9,6448,abnormal). suc(r9,r8). end(model).";
const char* kAbpBlock =
    "begin(model). rs_3_ABP. dias(pd4,3406,80). suc(pd4,ps3). sys(ps4,3558,120). suc(ps4,pd4). end(model).";

FactSet saturated(const char* block) {
  auto in = parse_model_file(block).at(0);
  return saturate(in, SymbolizationConfig::cardiac()).facts;
}

}  // namespace

TEST(Covers, DoubletRule) {
  auto facts = saturated(kDoubletBlock);
  auto c = parse_clause("class(doublet) :- qrs(X,abnormal), qrs(Y,abnormal), suc(Y,X).");
  ASSERT_TRUE(covers(c, facts));
  auto s = covering_substitution(c, facts);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->lookup(Term::variable("X"))->name(), "r8");
  EXPECT_EQ(s->lookup(Term::variable("Y"))->name(), "r9");
  EXPECT_TRUE(oracle::covers(c, facts.atoms()));
  // the witness is the only one
  int witnesses = 0;
  oracle::any_assignment({"X", "Y"}, {Term::constant("p7"), Term::constant("r7"), Term::constant("r8"), Term::constant("r9")},
                         [&](const Substitution& s) {
                           bool all = true;
                           for (const auto& l : c.body) all = all && facts.contains(apply_substitution(l, s));
                           witnesses += all;
                           return false;
                         });
  EXPECT_EQ(witnesses, 1);
}

TEST(Covers, EmptyBodyAndMissingPredicate) {
  auto abp = saturated(kAbpBlock);
  EXPECT_TRUE(covers(parse_clause("class(rs)."), abp));
  EXPECT_TRUE(covers(parse_clause("class(rs)."), FactSet{}));
  EXPECT_FALSE(covers(parse_clause("class(rs) :- p(Z,normal)."), abp));
}

TEST(TheoryCovers, Disjunction) {
  auto facts = saturated(kDoubletBlock);
  auto yes = parse_clause("class(doublet) :- qrs(X,abnormal).");
  auto no1 = parse_clause("class(doublet) :- p(X,abnormal).");
  auto no2 = parse_clause("class(doublet) :- dias(X,high).");
  EXPECT_FALSE(theory_covers({}, facts));
  EXPECT_TRUE(theory_covers({no1, yes}, facts));
  EXPECT_FALSE(theory_covers({no1, no2}, facts));
}

TEST(Covers, AgreesWithOracle) {
  oracle::RandomLogic g(21);
  int positive = 0;
  for (int i = 0; i < 3000; ++i) {
    Clause c = g.clause(4);
    auto facts = g.facts(8);
    bool want = oracle::covers(c, facts);
    positive += want;
    ASSERT_EQ(covers(c, FactSet(facts)), want) << to_string(c);
  }
  EXPECT_GT(positive, 300);
  EXPECT_LT(positive, 2700);
}

TEST(Covers, AgreesWithOracleOnSaturatedTimelines) {
  // longer chains over a real saturated fact set
  auto facts = saturated(kDoubletBlock);
  const std::vector<std::string> pool = {"qrs(X,abnormal)", "qrs(Y,normal)", "p(Z,normal)", "suc(X,Y)", "suc(Y,Z)",
                                         "suci(X,Y)", "suci(Y,Z)", "rr1(Y,X,long)", "rr1(X,Y,short)", "pr1(Z,Y,short)"};
  std::mt19937 rng(5);
  for (int i = 0; i < 1000; ++i) {
    Clause c{class_head("doublet"), {}};
    std::size_t n = rng() % 5;
    for (std::size_t k = 0; k < n; ++k) c.body.push_back(parse_literal(pool[rng() % pool.size()]));
    ASSERT_EQ(covers(c, facts), oracle::covers(c, facts.atoms())) << to_string(c);
  }
}

TEST(Covers, ConcurrentCallsAgree) {
  oracle::RandomLogic g(22);
  std::vector<Clause> cs;
  std::vector<FactSet> fs;
  std::vector<char> want;
  for (int i = 0; i < 400; ++i) {
    cs.push_back(g.clause(4));
    fs.emplace_back(g.facts(8));
    want.push_back(covers(cs.back(), fs.back()));
  }
  std::vector<char> got(cs.size());
  parallel_for(cs.size(), [&](std::size_t i) { got[i] = covers(cs[i], fs[i]); }, 1);
  EXPECT_EQ(got, want);
}
