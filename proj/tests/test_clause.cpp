#include <gtest/gtest.h>

#include "oracles.hpp"
#include "relic/relic.hpp"

using namespace relic;

namespace {

Substitution subst(std::initializer_list<std::pair<const char*, const char*>> xs) {
  Substitution s;
  for (auto [v, t] : xs) s.bind(Term::variable(v), Term::parse(t));
  return s;
}

}  // namespace

TEST(Term, CaseDecidesKind) {
  EXPECT_TRUE(Term::parse("P1").is_variable());
  EXPECT_TRUE(Term::parse("_G").is_variable());
  EXPECT_TRUE(Term::parse("p7").is_constant());
  EXPECT_TRUE(Term::parse("5026").is_constant());
  EXPECT_NE(Term::variable("X"), Term::constant("X"));
}

TEST(Parse, ClauseRoundTrip) {
  auto c = parse_clause("class(doublet) :- qrs(X,abnormal), qrs(Y,abnormal), suc(Y,X).");
  EXPECT_EQ(c.head, class_head("doublet"));
  ASSERT_EQ(c.body.size(), 3u);
  EXPECT_EQ(parse_clause(to_string(c)), c);
  EXPECT_TRUE(parse_clause("class(x).").body.empty());
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_clause("class(x) :- p(X"), ParseError);
  EXPECT_THROW(parse_clause("class(x) :- ,"), ParseError);
  EXPECT_THROW(parse_clause("class(x) :- p(X) q(Y)."), ParseError);
}

TEST(ApplySubstitution, Examples) {
  EXPECT_EQ(apply_substitution(parse_literal("p(X,normal)"), subst({{"X", "p7"}})), parse_literal("p(p7,normal)"));
  EXPECT_EQ(apply_substitution(parse_literal("p(X,normal)"), Substitution{}), parse_literal("p(X,normal)"));
  EXPECT_EQ(apply_substitution(parse_literal("suc(X,Y)"), subst({{"X", "r8"}, {"Y", "r7"}})),
            parse_literal("suc(r8,r7)"));
}

TEST(ApplySubstitution, NormalizedIsIdempotent) {
  oracle::RandomLogic g(7);
  const char* names[] = {"A", "B", "C", "a", "b"};
  for (int round = 0; round < 500; ++round) {
    Substitution s;
    for (const char* v : {"A", "B", "C"})
      if (g.pick(2)) s.bind(Term::variable(v), Term::parse(names[g.pick(5)]));
    Substitution n = s.normalized();
    for (const auto& [var, value] : n.bindings())
      if (value.is_variable() && value.name() != var) {
        EXPECT_EQ(n.lookup(value), nullptr);
      }
    Clause c = g.clause(4);
    Clause once = apply_substitution(c, n);
    EXPECT_EQ(apply_substitution(once, n), once) << to_string(c);
  }
}

TEST(ThetaSubsumes, Examples) {
  auto c = parse_clause("class(x) :- qrs(A,normal).");
  auto d = parse_clause("class(x) :- qrs(A,normal), p(B,normal).");
  EXPECT_TRUE(theta_subsumes(c, d));
  EXPECT_FALSE(theta_subsumes(d, c));
  EXPECT_TRUE(theta_subsumes(d, d));
  EXPECT_FALSE(theta_subsumes(parse_clause("class(x) :- qrs(A,abnormal)."), parse_clause("class(x) :- qrs(B,normal).")));
  EXPECT_FALSE(oracle::subsumes(parse_clause("class(x) :- qrs(A,abnormal)."), parse_clause("class(x) :- qrs(B,normal).")));
  // heads take part
  EXPECT_FALSE(theta_subsumes(parse_clause("class(x) :- p(A)."), parse_clause("class(y) :- p(A).")));
  // variables of d are frozen: p(A,A) does not subsume p(B,C)
  EXPECT_FALSE(theta_subsumes(parse_clause("class(x) :- q(A,A)."), parse_clause("class(x) :- q(B,C).")));
  EXPECT_TRUE(theta_subsumes(parse_clause("class(x) :- q(A,B)."), parse_clause("class(x) :- q(C,C).")));
}

TEST(ThetaSubsumes, AgreesWithOracle) {
  oracle::RandomLogic g(11);
  int positive = 0;
  for (int i = 0; i < 2000; ++i) {
    Clause c = g.clause(3), d = g.clause(4);
    bool want = oracle::subsumes(c, d);
    positive += want;
    ASSERT_EQ(theta_subsumes(c, d), want) << to_string(c) << "  vs  " << to_string(d);
  }
  EXPECT_GT(positive, 100);
}

TEST(ThetaSubsumes, ReflexiveAndTransitive) {
  oracle::RandomLogic g(12);
  int chains = 0;
  for (int i = 0; i < 3000; ++i) {
    Clause a = g.clause(2), b = g.clause(3), c = g.clause(4);
    ASSERT_TRUE(theta_subsumes(a, a)) << to_string(a);
    if (theta_subsumes(a, b) && theta_subsumes(b, c)) {
      ++chains;
      ASSERT_TRUE(theta_subsumes(a, c)) << to_string(a) << " / " << to_string(b) << " / " << to_string(c);
    }
  }
  EXPECT_GT(chains, 50);
}

TEST(ThetaSubsumes, GeneralitySoundness) {
  oracle::RandomLogic g(13);
  int checked = 0;
  for (int i = 0; i < 1500; ++i) {
    Clause c = g.clause(2), d = g.clause(3);
    if (!theta_subsumes(c, d)) continue;
    for (int k = 0; k < 5; ++k) {
      auto facts = g.facts(8);
      if (oracle::covers(d, facts)) {
        ++checked;
        ASSERT_TRUE(oracle::covers(c, facts)) << to_string(c) << " / " << to_string(d);
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(StandardizeApart, Examples) {
  auto c1 = parse_clause("class(x) :- p(R0,normal), qrs(R1,normal).");
  auto c2 = parse_clause("class(x) :- dias(R0,low).");
  auto [a, b] = standardize_apart(c1, c2);
  EXPECT_EQ(a, c1);
  EXPECT_EQ(b, parse_clause("class(x) :- dias(R0_2,low)."));

  auto d = parse_clause("class(x) :- sys(S0,high).");
  EXPECT_EQ(standardize_apart(c1, d).second, d);

  auto g1 = parse_clause("class(x) :- p(p7,normal).");
  auto g2 = parse_clause("class(x) :- p(p8,normal).");
  auto [h1, h2] = standardize_apart(g1, g2);
  EXPECT_EQ(h1, g1);
  EXPECT_EQ(h2, g2);
}

TEST(StandardizeApart, DisjointVariantsOnRandomPairs) {
  oracle::RandomLogic g(14);
  for (int i = 0; i < 500; ++i) {
    Clause c1 = g.clause(4), c2 = g.clause(4);
    auto [a, b] = standardize_apart(c1, c2);
    auto va = variable_names(a), vb = variable_names(b);
    for (const auto& v : vb) EXPECT_FALSE(va.count(v));
    // variants: each subsumes the other
    EXPECT_TRUE(theta_subsumes(b, c2) && theta_subsumes(c2, b));
    EXPECT_EQ(standardize_apart(c1, c2), std::make_pair(a, b));
  }
}

TEST(CanonicalText, IgnoresBodyOrder) {
  auto a = parse_clause("class(x) :- p(A), q(A,B).");
  auto b = parse_clause("class(x) :- q(A,B), p(A).");
  EXPECT_EQ(canonical_text(a), canonical_text(b));
  EXPECT_NE(canonical_text(a), canonical_text(parse_clause("class(x) :- p(A).")));
}
