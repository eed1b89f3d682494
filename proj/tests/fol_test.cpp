#include <gtest/gtest.h>

#include <random>

#include "lnn/fol.hpp"
#include "lnn/inference.hpp"
#include "printers.hpp"
#include "support/oracles.hpp"

using namespace lnn;

namespace {

GroundingTable table(std::vector<std::string> vars,
                     std::vector<std::pair<std::vector<std::string>, Bounds>> rows) {
  GroundingTable t;
  t.vars = std::move(vars);
  for (auto& [tup, b] : rows) t.add(tup, b);
  return t;
}

}  // namespace

TEST(Join, SharedVariable) {
  auto f = table({"x", "y"}, {{{"a", "b"}, {1, 1}}, {{"b", "c"}, {0.5, 1}}});
  auto s = table({"y"}, {{{"b"}, {0.9, 1}}});
  auto rows = join_operands({"x", "y"}, {f, s}, {{"x", "y"}, {"y"}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].tuple, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rows[0].inputs, (std::vector<Bounds>{{1, 1}, {0.9, 1}}));
  // S(c) was never observed.
  EXPECT_EQ(rows[1].tuple, (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(rows[1].inputs, (std::vector<Bounds>{{0.5, 1}, kUnknown}));
}

TEST(Join, UnobservedVariableYieldsNothing) {
  auto p = table({"x"}, {{{"a"}, {1, 1}}});
  auto q = table({"y"}, {});
  EXPECT_TRUE(join_operands({"x", "y"}, {p, q}, {{"x"}, {"y"}}).empty());
  // Disjoint variables expand over the observed tuples only.
  auto q2 = table({"y"}, {{{"b"}, {0, 0}}, {{"c"}, {1, 1}}});
  auto rows = join_operands({"x", "y"}, {p, q2}, {{"x"}, {"y"}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].tuple, (std::vector<std::string>{"a", "c"}));
}

TEST(Join, RepeatedVariableForcesEquality) {
  auto f = table({"arg0", "arg1"}, {{{"a", "a"}, {1, 1}}, {{"a", "b"}, {0, 0}}, {{"b", "b"}, {0, 1}}});
  auto rows = join_operands({"x"}, {f}, {{"x", "x"}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].tuple, (std::vector<std::string>{"a"}));
  EXPECT_EQ(rows[1].tuple, (std::vector<std::string>{"b"}));
}

TEST(Quantify, Upward) {
  std::vector<Bounds> rows{{0.9, 1}, {0.4, 0.8}, {1, 1}};
  EXPECT_EQ(quantify_upward(NodeKind::ForAll, rows), (Bounds{0.4, 0.8}));
  EXPECT_EQ(quantify_upward(NodeKind::Exists, rows), (Bounds{1, 1}));
  EXPECT_EQ(quantify_upward(NodeKind::ForAll, {}), kUnknown);
  EXPECT_EQ(quantify_upward(NodeKind::Exists, {}), kUnknown);
}

TEST(Quantify, Downward) {
  EXPECT_EQ(quantify_downward(NodeKind::ForAll, {0.7, 0.9}), (Bounds{0.7, 1}));
  EXPECT_EQ(quantify_downward(NodeKind::Exists, {0.7, 0.9}), (Bounds{0, 0.9}));
}

TEST(Quantify, Partial) {
  auto f = table({"x", "y"}, {{{"a", "a"}, {0, 0}},
                              {{"a", "b"}, {1, 1}},
                              {{"b", "a"}, {0.2, 0.6}},
                              {{"b", "b"}, {0.1, 0.3}}});
  auto ex = quantify_upward(NodeKind::Exists, f, {"y"});
  EXPECT_EQ(ex.vars, (std::vector<std::string>{"x"}));
  EXPECT_EQ(ex.get({"a"}), (Bounds{1, 1}));
  EXPECT_EQ(ex.get({"b"}), (Bounds{0.2, 0.6}));
  auto all = quantify_upward(NodeKind::ForAll, f, {"x"});
  EXPECT_EQ(all.get({"a"}), (Bounds{0, 0}));
  EXPECT_EQ(all.get({"b"}), (Bounds{0.1, 0.3}));
  EXPECT_THROW(quantify_upward(NodeKind::ForAll, f, {"z"}), std::invalid_argument);
}

TEST(Bind, RestrictsAnswers) {
  auto kb = parse_kb("const a b\n");
  BoundQuery q{parse_formula("F(x,y)"), {}};
  q = bind(q, "x", "a", kb);
  auto f = table({"x", "y"}, {{{"a", "a"}, {0, 0}}, {{"a", "b"}, {1, 1}}, {{"b", "a"}, {1, 1}}});
  auto out = filter(f, q);
  EXPECT_EQ(out.vars, f.vars);
  ASSERT_EQ(out.tuples.size(), 2u);
  for (auto& t : out.tuples) EXPECT_EQ(t[0], "a");

  EXPECT_THROW(bind(q, "x", "b", kb), ConfigError);
  EXPECT_THROW(bind(q, "z", "a", kb), ConfigError);
  EXPECT_THROW(bind(q, "y", "nobody", kb), ConfigError);
}

TEST(Table, GetAndCsv) {
  auto t = table({"x"}, {{{"a"}, {0.5, 1}}});
  EXPECT_EQ(t.get({"a"}), (Bounds{0.5, 1}));
  EXPECT_EQ(t.get({"b"}), kUnknown);
  auto csv = t.to_csv();
  EXPECT_NE(csv.find("x"), std::string::npos);
  EXPECT_NE(csv.find("a,0.5,1"), std::string::npos) << csv;
}

TEST(Propagation, SymmetryRule) {
  auto kb = parse_kb("const a b\naxiom r : F(x,y) -> F(y,x)\nfact F(a,b) : [1,1]\n");
  Graph g = compile(kb);
  g.reset();
  int f = g.find_atom("F");
  ASSERT_GE(g.find_row(f, {"b", "a"}), 0);
  EXPECT_EQ(g.atom_bounds("F", {"b", "a"}), kUnknown);
  auto rep = infer(g);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(g.atom_bounds("F", {"b", "a"}), (Bounds{1, 1}));
  EXPECT_EQ(g.atom_bounds("F", {"a", "a"}), kUnknown);

  auto t = table_of(g, f);
  EXPECT_EQ(t.vars, (std::vector<std::string>{"arg0", "arg1"}));
  EXPECT_EQ(t.get({"b", "a"}), (Bounds{1, 1}));
}

TEST(Propagation, SmokersFriendshipIsSymmetricAfterInference) {
  auto kb = load_kb(std::string(LNN_DATA_DIR) + "/smokers5.lnn");
  Graph g = compile(kb);
  g.reset();
  infer(g);
  for (auto& fact : kb.facts) {
    if (fact.predicate != "Friends" || fact.bounds.lower < 1) continue;
    Bounds back = g.atom_bounds("Friends", {fact.args[1], fact.args[0]});
    EXPECT_GE(back.lower, 1.0) << fact.args[1] << "," << fact.args[0];
  }
}

TEST(Quantifiers, ExistentialWitness) {
  auto kb = parse_kb("const a b c\nfact P(b) : [1,1]\nquery q : exists x. P(x)\nquery r : forall x. P(x)\n");
  Graph g = compile(kb);
  g.reset();
  infer(g);
  EXPECT_EQ(g.root_bounds(g.find_root("q")), (Bounds{1, 1}));
  EXPECT_EQ(g.root_bounds(g.find_root("r")), kUnknown);
}

TEST(Quantifiers, NegatedUniversalMatchesExistentialOfNegation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 30; ++t) {
    std::string text = "const a b c d\n";
    for (auto c : {"a", "b", "c", "d"}) {
      double l = u(rng), h = u(rng);
      if (l > h) std::swap(l, h);
      text += std::string("fact P(") + c + ") : [" + oracle::num(l) + "," + oracle::num(h) + "]\n";
    }
    text += "query q1 : ~(forall x. P(x))\nquery q2 : exists x. ~P(x)\n";
    Graph g = compile(parse_kb(text));
    g.reset();
    infer(g);
    Bounds b1 = g.root_bounds(g.find_root("q1"));
    Bounds b2 = g.root_bounds(g.find_root("q2"));
    EXPECT_NEAR(b1.lower, b2.lower, 1e-12);
    EXPECT_NEAR(b1.upper, b2.upper, 1e-12);
  }
}

TEST(Guided, AgreesWithFullGroundingOnQueries) {
  const char* text =
      "const a b c d e\n"
      "axiom r1 : F(x,y) -> F(y,x)\n"
      "axiom r2 : S(x) & F(x,y) -> S(y)\n"
      "fact F(a,b) : [1,1]\nfact S(a) : [1,1]\nfact F(d,e) : [1,1]\n"
      "query q : S(b)\n";
  auto kb = parse_kb(text);
  EXPECT_EQ(relevant_constants(kb), (std::vector<std::string>{"a", "b"}));
  Graph full = compile(kb);
  CompileOptions o;
  o.policy = GroundingPolicy::Guided;
  Graph guided = compile(kb, o);
  EXPECT_LT(guided.row_count(), full.row_count());
  full.reset();
  guided.reset();
  infer(full);
  infer(guided);
  EXPECT_EQ(full.root_bounds(full.find_root("q")), (Bounds{1, 1}));
  EXPECT_EQ(guided.root_bounds(guided.find_root("q")), full.root_bounds(full.find_root("q")));
}

TEST(Grounding, MatchesTextualPropositionalisation) {
  oracle::Rng rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 10; ++t) {
    oracle::FolKb kb;
    kb.preds = {{"P", 1}, {"Q", 1}, {"R", 2}};
    kb.constants = {"a", "b", "c"};
    auto atom = [](std::string p, std::vector<std::string> args) {
      oracle::FolExpr e;
      e.atom = {std::move(p), std::move(args)};
      return e;
    };
    oracle::FolExpr imp;
    imp.kind = oracle::FolExpr::Implies;
    oracle::FolExpr conj;
    conj.kind = oracle::FolExpr::And;
    conj.kids = {atom("P", {"x"}), atom("R", {"x", "y"})};
    conj.weights = {1, 1};
    imp.kids = {conj, atom("Q", {"y"})};
    imp.weights = {1, 1};
    kb.axioms = {imp};
    kb.axiom_bounds = {{1, 1}};
    for (auto& c : kb.constants) {
      if (u(rng) < 0.6) kb.facts.push_back({"P", {c}, 1, 1});
      for (auto& d : kb.constants)
        if (u(rng) < 0.4) kb.facts.push_back({"R", {c, d}, 1, 1});
    }
    Graph g1 = compile(parse_kb(kb.fol_text()));
    Graph g2 = compile(parse_kb(kb.propositional_text()));
    g1.reset();
    g2.reset();
    infer(g1);
    infer(g2);
    for (auto& c : kb.constants)
      EXPECT_EQ(g1.atom_bounds("Q", {c}), g2.atom_bounds(oracle::FolKb::ground_name("Q", {c})));
  }
}
