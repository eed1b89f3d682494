#include <gtest/gtest.h>

#include "lnn/inference.hpp"
#include "lnn/prob.hpp"
#include "printers.hpp"
#include "support/prob_check.hpp"

using namespace lnn;

namespace {

void expect_bounds(Bounds got, Bounds want) {
  EXPECT_NEAR(got.lower, want.lower, 1e-12);
  EXPECT_NEAR(got.upper, want.upper, 1e-12);
}

}  // namespace

TEST(ProbUpward, Examples) {
  std::vector<Bounds> in{{0.3, 0.4}, {0.5, 0.6}};
  expect_bounds(prob_upward(Connective::Or, in), {0.5, 1.0});
  std::vector<Bounds> t{{1, 1}, {1, 1}};
  EXPECT_EQ(prob_upward(Connective::And, t), (Bounds{1, 1}));
  std::vector<Bounds> xy{{0.9, 1}, {0.2, 0.3}};
  expect_bounds(prob_upward(Connective::Implies, xy), {0.2, 0.4});
}

TEST(ProbUpward, AndUsesMissingMass) {
  std::vector<Bounds> in{{0.7, 0.9}, {0.6, 0.8}};
  expect_bounds(prob_upward(Connective::And, in), {0.3, 0.8});
  std::vector<Bounds> low{{0.2, 0.9}, {0.3, 0.8}};
  expect_bounds(prob_upward(Connective::And, low), {0.0, 0.8});
}

TEST(ProbDownward, Examples) {
  std::vector<Bounds> in{kUnknown, {0, 0.3}};
  EXPECT_NEAR(prob_downward(Connective::Or, 0, in, {0.9, 1}).lower, 0.6, 1e-12);

  std::vector<Bounds> three(3, kUnknown);
  for (size_t j = 0; j < 3; ++j) EXPECT_EQ(prob_downward(Connective::And, j, three, {1, 1}).lower, 1.0);

  for (size_t j = 0; j < 3; ++j) EXPECT_LE(prob_downward(Connective::Or, j, three, {0, 0.2}).upper, 0.2);
}

TEST(ProbDownward, Implication) {
  // x true with certainty and x -> y true: y true.
  std::vector<Bounds> in{{1, 1}, kUnknown};
  EXPECT_EQ(prob_downward(Connective::Implies, 1, in, {1, 1}).lower, 1.0);
  // y false and x -> y true: x false.
  std::vector<Bounds> back{kUnknown, {0, 0}};
  EXPECT_EQ(prob_downward(Connective::Implies, 0, back, {1, 1}).upper, 0.0);
}

TEST(ProbInference, DegeneratesToClassicalValues) {
  for (auto [a, b] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
    std::string text = "fact p : [" + std::to_string(a) + "," + std::to_string(a) + "]\n" +
                       "fact q : [" + std::to_string(b) + "," + std::to_string(b) + "]\n" +
                       "query r : p | q\nquery s : p & q\nquery t : p -> q\n";
    Graph g = compile(parse_kb(text));
    g.reset();
    InferenceOptions o;
    o.family = Family::Probability;
    infer(g, o);
    double orv = a || b, andv = a && b, impv = !a || b;
    EXPECT_EQ(g.root_bounds(g.find_root("r")), (Bounds{orv, orv}));
    EXPECT_EQ(g.root_bounds(g.find_root("s")), (Bounds{andv, andv}));
    EXPECT_EQ(g.root_bounds(g.find_root("t")), (Bounds{impv, impv}));
  }
}

TEST(ProbInference, SampledModelsStayInsideBounds) {
  oracle::Rng rng(41);
  for (int t = 0; t < 8; ++t) {
    auto r = oracle::check_probability_theory(rng, 4, 6, 200);
    EXPECT_TRUE(r.converged) << r.text;
    EXPECT_GE(r.accepted, 200u) << r.text;
    EXPECT_EQ(r.violations, 0u) << r.text << "worst " << r.worst;
  }
}
