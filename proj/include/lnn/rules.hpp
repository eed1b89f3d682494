#pragma once

// Upward and downward bound rules for one connective, per activation family.
// Operands of an implication are (antecedent, consequent).

#include <span>
#include <utility>
#include <vector>

#include "lnn/bounds.hpp"
#include "lnn/dual.hpp"
#include "lnn/semantics.hpp"

namespace lnn {

enum class Connective { And, Or, Implies };

struct DBounds {
  Dual L, U;
};

inline DBounds negate(const DBounds& b) { return {1.0 - b.U, 1.0 - b.L}; }

struct RuleContext {
  Family family = Family::Lukasiewicz;
  double alpha = 1.0;
  double grad_scale = 1.0;  // derivative scale outside clamps
  double w_min = 1e-9;      // operands lighter than this receive no downward proof
  Dual bias = 1.0;
  std::span<const Dual> weights;
};

DBounds upward(Connective c, const RuleContext& ctx, std::span<const DBounds> in);
DBounds downward(Connective c, const RuleContext& ctx, const DBounds& out,
                 std::span<const DBounds> in, size_t j);

// Plain-value entry points.
Bounds upward(Connective c, const ConnectiveParams& p, std::span<const Bounds> in);
Bounds downward_or(const ConnectiveParams& p, size_t j, std::span<const Bounds> in, Bounds out,
                   double w_min = 1e-9);
Bounds downward_and(const ConnectiveParams& p, size_t j, std::span<const Bounds> in, Bounds out,
                    double w_min = 1e-9);
std::pair<Bounds, Bounds> downward_implies(const ConnectiveParams& p, Bounds x, Bounds y,
                                           Bounds out, double w_min = 1e-9);
// Tailored conjunction: tautology route conditioned on the functional inverse.
Bounds conditioned_downward(const ConnectiveParams& p, size_t j, std::span<const Bounds> in,
                            Bounds out, double w_min = 1e-9);
// The two routes separately, for inspection.
Bounds tautology_downward(const ConnectiveParams& p, size_t j, std::span<const Bounds> in,
                          Bounds out);
Bounds inverse_downward(const ConnectiveParams& p, size_t j, std::span<const Bounds> in,
                        Bounds out);

}  // namespace lnn
