#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "lnn/graph.hpp"
#include "printers.hpp"

using namespace lnn;

namespace {

// Connective and quantifier occurrences plus distinct predicates, counted on
// the syntax trees.  Negation is not a node.
struct Census {
  size_t inner = 0;
  std::set<std::string> preds;
  void walk(const Formula& f) {
    if (f.kind == FormulaKind::Atom) {
      preds.insert(f.name);
      return;
    }
    if (f.kind != FormulaKind::Not) ++inner;
    for (auto& c : f.children) walk(c);
  }
};

size_t power(size_t b, size_t e) {
  size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST(Compile, ImplicationKb) {
  auto kb = parse_kb("axiom r : x -> y\nfact x : [1,1]\n");
  Graph g = compile(kb);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.roots.size(), 1u);
  g.reset();
  EXPECT_EQ(g.atom_bounds("x"), (Bounds{1, 1}));
  EXPECT_EQ(g.atom_bounds("y"), kUnknown);
  EXPECT_EQ(g.root_bounds(0), (Bounds{1, 1}));
}

TEST(Compile, EmptyKb) {
  Graph g = compile(parse_kb(""));
  EXPECT_EQ(g.node_count(), 0u);
  EXPECT_EQ(g.row_count(), 0u);
  EXPECT_TRUE(g.roots.empty());
}

TEST(Compile, SmokersStructuralCount) {
  for (auto file : {"/smokers5.lnn", "/smokers8.lnn"}) {
    auto kb = load_kb(std::string(LNN_DATA_DIR) + file);
    Census c;
    for (auto& a : kb.axioms) c.walk(a.formula);
    for (auto& q : kb.queries) c.walk(q.formula);
    Graph g = compile(kb);
    EXPECT_EQ(g.node_count(), c.inner + c.preds.size()) << file;

    // A connective over k free variables has one row per ground instance.
    size_t n = kb.constants.size();
    for (auto& node : g.nodes) {
      if (node.is_atom()) continue;
      EXPECT_EQ(node.rows(), power(n, node.scope.size())) << node.label;
    }
  }
}

TEST(Compile, AtomsAreShared) {
  auto kb = parse_kb("axiom r1 : p -> q\naxiom r2 : q -> s\naxiom r3 : p & s\n");
  Graph g = compile(kb);
  EXPECT_EQ(g.node_count(), 6u);
  int q = g.find_atom("q");
  ASSERT_GE(q, 0);
  int uses = 0;
  for (auto& n : g.nodes)
    for (auto& o : n.operands) uses += o.node == q;
  EXPECT_EQ(uses, 2);

  g.reset();
  g.aggregate(q, 0, {0.7, 1});
  EXPECT_EQ(g.atom_bounds("q"), (Bounds{0.7, 1}));
}

TEST(Compile, NegationIsEdgePolarity) {
  Graph g = compile(parse_kb("axiom r : ~p | ~~q\n"));
  EXPECT_EQ(g.node_count(), 3u);
  const Node& orn = g.nodes[g.roots[0].ref.node];
  ASSERT_EQ(orn.operands.size(), 2u);
  EXPECT_TRUE(orn.operands[0].negated);
  EXPECT_FALSE(orn.operands[1].negated);
}

TEST(Compile, NegatedRoot) {
  Graph g = compile(parse_kb("axiom r : ~p\n"));
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_TRUE(g.roots[0].ref.negated);
  g.reset();
  // The root is the atom itself, seen through the negated edge.
  EXPECT_EQ(g.root_bounds(0), (Bounds{1, 1}));
  EXPECT_EQ(g.atom_bounds("p"), (Bounds{0, 0}));
}

TEST(Aggregate, Examples) {
  EXPECT_EQ(aggregate({0.2, 0.9}, {0.5, 1.0}), (Bounds{0.5, 0.9}));
  EXPECT_EQ(aggregate({0, 1}, {0, 1}), (Bounds{0, 1}));
  Bounds c = aggregate({0.8, 1}, {0, 0.3});
  EXPECT_EQ(c, (Bounds{0.8, 0.3}));
  EXPECT_TRUE(c.contradictory());
  EXPECT_EQ(classify(c, 1.0), TruthState::Contradiction);
}

TEST(Aggregate, OrderIndependentAndIdempotent) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 200; ++t) {
    std::vector<Bounds> proofs(6);
    for (auto& p : proofs) {
      double a = u(rng), b = u(rng);
      p = {std::min(a, b), std::max(a, b)};
    }
    Bounds want{0, 1};
    for (auto& p : proofs) {
      want.lower = std::max(want.lower, p.lower);
      want.upper = std::min(want.upper, p.upper);
    }
    for (int k = 0; k < 5; ++k) {
      std::shuffle(proofs.begin(), proofs.end(), rng);
      Bounds b = kUnknown;
      for (auto& p : proofs) {
        Bounds next = aggregate(b, p);
        EXPECT_GE(next.lower, b.lower);
        EXPECT_LE(next.upper, b.upper);
        b = next;
      }
      EXPECT_EQ(b, want);
      EXPECT_EQ(aggregate(b, b), b);
    }
  }
}

TEST(Classify, PrimaryStates) {
  EXPECT_EQ(classify({1, 1}, 0.7), TruthState::True);
  EXPECT_EQ(classify({0, 1}, 0.7), TruthState::Unknown);
  EXPECT_EQ(classify({0.6, 0.4}, 0.7), TruthState::Contradiction);
  EXPECT_EQ(classify({0, 0}, 0.7), TruthState::False);
  EXPECT_EQ(classify({0.75, 0.9}, 0.7), TruthState::True);
  EXPECT_EQ(classify({0.1, 0.25}, 0.7), TruthState::False);
}

TEST(Classify, GridAgreesWithDefinitions) {
  for (double alpha : {0.6, 0.7, 0.9, 1.0}) {
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        Bounds b{i / 20.0, j / 20.0};
        auto s = classify(b, alpha);
        if (b.lower > b.upper) {
          EXPECT_EQ(s, TruthState::Contradiction);
        } else if (b.lower >= alpha) {
          EXPECT_EQ(s, TruthState::True);
        } else if (b.upper <= 1 - alpha) {
          EXPECT_EQ(s, TruthState::False);
        } else if (b.lower <= 1 - alpha && b.upper >= alpha) {
          EXPECT_EQ(s, TruthState::Unknown);
        } else {
          EXPECT_TRUE(s == TruthState::ApproxTrue || s == TruthState::ApproxFalse ||
                      s == TruthState::ApproxUnknown)
              << b.lower << " " << b.upper << " " << alpha;
        }
      }
  }
}

TEST(Classify, IntraClassical) {
  EXPECT_TRUE(intra_classical({0.95, 0.85}, 0.8));
  EXPECT_TRUE(intra_classical({0.15, 0.05}, 0.8));
  EXPECT_FALSE(intra_classical({0.9, 0.1}, 0.8));
  EXPECT_FALSE(intra_classical({0.5, 0.6}, 0.8));
}

TEST(Reset, SeedsFactsAndAxioms) {
  auto kb = parse_kb("const a b\naxiom r : P(x) -> Q(x) : [0.9, 1]\nfact P(a) : [0.8, 1]\n");
  Graph g = compile(kb);
  g.reset();
  EXPECT_EQ(g.atom_bounds("P", {"a"}), (Bounds{0.8, 1}));
  EXPECT_EQ(g.atom_bounds("P", {"b"}), kUnknown);
  int r = g.find_root("r");
  for (size_t k = 0; k < g.roots[r].tuples.size(); ++k)
    EXPECT_EQ(g.root_bounds(r, k), (Bounds{0.9, 1}));
  g.aggregate(g.find_atom("Q"), g.find_row(g.find_atom("Q"), {"b"}), {1, 1});
  g.reset();
  EXPECT_EQ(g.atom_bounds("Q", {"b"}), kUnknown);
}
