#pragma once

#include <limits>
#include <vector>

namespace cpfl::fl {

/// Early-stopping state: raw loss history, moving-average smoothing over the
/// last `window` values, patience counter that resets exactly when a new
/// strict smoothed minimum appears.
struct StoppingState {
  int window = 1;
  int patience = 1;
  std::vector<double> history;
  double best_smoothed = std::numeric_limits<double>::infinity();
  int rounds_since_improvement = 0;

  static StoppingState create(int window, int patience);
};

/// Appends the loss, updates the smoothed minimum and patience counter.
/// Returns true once the counter reaches the patience. Rejects NaN.
bool smooth_and_check(StoppingState& state, double new_val_loss);

}  // namespace cpfl::fl
