#pragma once

// Upward-downward inference to convergence.
//
// Each iteration visits the roots in order (axioms, then queries).  For every
// ground row of a root the subtree is evaluated upward, then, for axioms,
// bounds are pushed back down to the atoms.  Tightening is monotone, so the
// loop stops once the summed bound change of an iteration is at most epsilon.

#include <cstdint>
#include <vector>

#include "lnn/graph.hpp"
#include "lnn/semantics.hpp"
#include "lnn/tape.hpp"

namespace lnn {

struct InferenceOptions {
  Family family = Family::Lukasiewicz;
  double alpha = 1.0;
  double epsilon = 1e-4;
  int max_iters = 1000;
  double w_min = 1e-9;
  double grad_scale = 1.0;
  // Contradictory rows stop offering downward proofs.
  bool halt_at_contradiction = true;
  // Skip a row whose inputs have not changed since it was last evaluated.
  bool skip_unchanged = true;
};

struct ContradictionEntry {
  int node = -1;
  int row = -1;
  Bounds bounds;
  bool intra_classical = false;
};

struct ConvergenceReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> deltas;
  std::vector<ContradictionEntry> contradictions;
};

// Tape ids of trainable connective parameters; -1 means untracked.
struct ParameterIds {
  std::vector<std::vector<int>> weights;  // [node][operand]
  std::vector<int> bias;                  // [node]
};

// Throws ConfigError when the options cannot be honoured by this graph.
void validate(const Graph& g, const InferenceOptions& opts);

ConvergenceReport infer(Graph& g, const InferenceOptions& opts = {}, Tape* tape = nullptr,
                        const ParameterIds* ids = nullptr);

// Single passes over one root, all of its rows.
double upward_pass(Graph& g, int root, const InferenceOptions& opts = {});
double downward_pass(Graph& g, int root, const InferenceOptions& opts = {});

std::vector<ContradictionEntry> contradictions(const Graph& g, double alpha);
// Contradictions that count toward the loss for this family.
size_t contradiction_count(const Graph& g, const InferenceOptions& opts);

}  // namespace lnn
