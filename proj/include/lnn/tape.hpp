#pragma once

// Reverse-mode tape.  Each entry is a recorded value whose local partials
// point at earlier entries; leaves are trainable parameters.

#include <vector>

#include "lnn/dual.hpp"

namespace lnn {

class Tape {
 public:
  int leaf() {
    start_.push_back(static_cast<int>(edges_.size()));
    return size() - 1;
  }

  // Records a value computed from earlier entries.  Returns -1 for constants.
  int push(const Dual& x) {
    if (!x.tracked()) return -1;
    start_.push_back(static_cast<int>(edges_.size()));
    edges_.insert(edges_.end(), x.d.begin(), x.d.end());
    return size() - 1;
  }

  int size() const { return static_cast<int>(start_.size()); }

  // Propagates adjoints from later entries to earlier ones, in place.
  void backward(std::vector<double>& adjoint) const {
    adjoint.resize(start_.size(), 0.0);
    for (int i = size() - 1; i >= 0; --i) {
      double a = adjoint[i];
      if (a == 0.0) continue;
      int end = i + 1 < size() ? start_[i + 1] : static_cast<int>(edges_.size());
      for (int e = start_[i]; e < end; ++e) adjoint[edges_[e].first] += a * edges_[e].second;
    }
  }

  void clear() {
    start_.clear();
    edges_.clear();
  }

 private:
  std::vector<int> start_;
  std::vector<std::pair<int, double>> edges_;
};

}  // namespace lnn
