#include "lnn/bounds.hpp"

namespace lnn {

std::string_view to_string(TruthState s) {
  switch (s) {
    case TruthState::Unknown: return "Unknown";
    case TruthState::True: return "True";
    case TruthState::False: return "False";
    case TruthState::Contradiction: return "Contradiction";
    case TruthState::ApproxUnknown: return "~Unknown";
    case TruthState::ApproxTrue: return "~True";
    case TruthState::ApproxFalse: return "~False";
  }
  return "?";
}

TruthState classify(Bounds b, double alpha) {
  const double L = b.lower, U = b.upper;
  if (L > U) return TruthState::Contradiction;
  if (L >= alpha && U >= alpha) return TruthState::True;
  if (U <= 1.0 - alpha && L <= 1.0 - alpha) return TruthState::False;
  if (L <= 1.0 - alpha && U >= alpha) return TruthState::Unknown;
  if (L > 0.5) return TruthState::ApproxTrue;
  if (U < 0.5) return TruthState::ApproxFalse;
  return TruthState::ApproxUnknown;
}

bool intra_classical(Bounds b, double alpha) {
  if (!(b.lower > b.upper)) return false;
  return (b.upper >= alpha) || (b.lower <= 1.0 - alpha);
}

}  // namespace lnn
