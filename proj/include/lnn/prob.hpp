#pragma once

// Probability-bounds semantics: separate lower and upper update functions
// whose results bracket the probability that a formula is classically true.

#include <span>

#include "lnn/rules.hpp"

namespace lnn {

namespace prob {
DBounds upward(Connective c, std::span<const DBounds> in);
DBounds downward(Connective c, const DBounds& out, std::span<const DBounds> in, size_t j);
}  // namespace prob

Bounds prob_upward(Connective c, std::span<const Bounds> in);
Bounds prob_downward(Connective c, size_t j, std::span<const Bounds> in, Bounds out);

}  // namespace lnn
