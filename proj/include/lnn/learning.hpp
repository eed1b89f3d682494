#pragma once

// Training of connective weights and initial bounds against the loss
// (1 + contradiction) / (1 + factalign + tightbounds) by projected gradient
// descent, with gradients taken through the whole unrolled inference.

#include <cstdint>
#include <string>
#include <vector>

#include "lnn/graph.hpp"
#include "lnn/inference.hpp"
#include "lnn/semantics.hpp"

namespace lnn {

struct TrainConfig {
  int epochs = 100;
  double lr_start = 0.1;
  double lr_end = 0.0;
  double grad_clip = 0.1;
  double w_min = 0.01;
  double alpha = 1.0;
  Family family = Family::Lukasiewicz;
  double grad_scale = 1.0;
  bool train_weights = true;
  bool train_bias = false;
  bool train_axioms = true;
  bool train_facts = true;
  bool normalize_weights = true;
  // Limits weight, bias and axiom-bound training to these roots; empty means all.
  std::vector<std::string> roots;
  // factalign also measures drift of trainable axiom bounds.
  bool align_axioms = false;
  // tightbounds averages over atom rows only instead of every row.
  bool tight_atoms_only = false;
  double epsilon = 1e-4;
  int max_iters = 1000;
  // Uniform jitter of the initial weights, drawn from `seed`; 0 disables it.
  double init_noise = 0.0;
  std::uint64_t seed = 0;

  InferenceOptions inference() const;
};

struct LossTerms {
  double loss = 0.0;
  double contradiction = 0.0;
  double factalign = 0.0;
  double tightbounds = 0.0;
  int contradictions = 0;
};

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  LossTerms terms;
  int iterations = 0;
  bool converged = true;
};

enum class ParamKind { Weight, Bias, FactLower, FactUpper, AxiomLower, AxiomUpper };

struct ParamRef {
  ParamKind kind = ParamKind::Weight;
  int index = 0;    // node, fact or root
  int operand = 0;  // weights only
  bool operator==(const ParamRef&) const = default;
};

std::string describe(const Graph& g, const ParamRef& p);
double& value_of(Graph& g, const ParamRef& p);

// Fact bounds the factalign term is measured from.
struct Originals {
  std::vector<Bounds> facts;
  std::vector<Bounds> axioms;
};
Originals originals_of(const Graph& g);

struct TrainReport {
  std::vector<EpochRecord> epochs;
  EpochRecord final_state;  // re-evaluated after the last update
};

// Parameters selected by the config, in a fixed order.
std::vector<ParamRef> trainable(const Graph& g, const TrainConfig& cfg);

// Resets, infers and evaluates the loss on the graph's current parameters.
LossTerms evaluate(Graph& g, const TrainConfig& cfg, const Originals& orig,
                   ConvergenceReport* rep = nullptr);

// Loss terms of the graph's current bounds, without re-running inference.
LossTerms loss_terms(const Graph& g, const TrainConfig& cfg, const Originals& orig);
double contradiction_loss(const Graph& g, const InferenceOptions& opts);

// Analytic gradient of the loss for each parameter, one inference run.
std::vector<double> gradient(Graph& g, const TrainConfig& cfg, const Originals& orig,
                             const std::vector<ParamRef>& params, LossTerms* terms = nullptr);

struct FiniteDifference {
  double value = 0.0;
  bool one_sided = false;
};
// Central difference with full re-inference; one-sided at a domain boundary.
FiniteDifference finite_diff_gradient(Graph& g, const TrainConfig& cfg, const Originals& orig,
                                      const ParamRef& p, double h);

// Keeps every parameter in its domain; crossed fact bounds collapse to their midpoint.
void project(Graph& g, const TrainConfig& cfg);

TrainReport train(Graph& g, const TrainConfig& cfg);

struct ConstraintViolation {
  int operand = -1;  // -1 for the all-false constraint
  double margin = 0.0;
  std::string description;
};
// Disjunction-form classicality constraints.  Slacks, when given, relax the
// per-operand constraint to 1 - beta + alpha w_i + s_i >= alpha.
std::vector<ConstraintViolation> check_constraints(const ConnectiveParams& p,
                                                   const std::vector<double>& slacks = {});

}  // namespace lnn
