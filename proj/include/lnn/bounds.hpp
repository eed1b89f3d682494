#pragma once

#include <string_view>

namespace lnn {

struct Bounds {
  double lower = 0.0;
  double upper = 1.0;

  bool contradictory() const { return lower > upper; }
  bool operator==(const Bounds&) const = default;
};

inline constexpr Bounds kUnknown{0.0, 1.0};

enum class TruthState { Unknown, True, False, Contradiction, ApproxUnknown, ApproxTrue, ApproxFalse };

std::string_view to_string(TruthState s);

TruthState classify(Bounds b, double alpha);

// Monotone tightening: (max L, min U).  Crossing bounds are kept as-is.
inline Bounds aggregate(Bounds old, Bounds proposed) {
  return {old.lower < proposed.lower ? proposed.lower : old.lower,
          old.upper > proposed.upper ? proposed.upper : old.upper};
}

inline Bounds negate(Bounds b) { return {1.0 - b.upper, 1.0 - b.lower}; }

// Crossed bounds that still agree on the classical side.
bool intra_classical(Bounds b, double alpha);

}  // namespace lnn
