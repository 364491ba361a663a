#include "cpfl/fl/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace cpfl::fl {

StoppingState StoppingState::create(int window, int patience) {
  if (window < 1) throw std::invalid_argument("StoppingState: window must be >= 1");
  if (patience < 1) throw std::invalid_argument("StoppingState: patience must be >= 1");
  StoppingState state;
  state.window = window;
  state.patience = patience;
  return state;
}

bool smooth_and_check(StoppingState& state, double new_val_loss) {
  if (std::isnan(new_val_loss)) throw std::invalid_argument("smooth_and_check: loss is NaN");
  state.history.push_back(new_val_loss);

  const std::size_t span = std::min<std::size_t>(static_cast<std::size_t>(state.window),
                                                 state.history.size());
  double sum = 0.0;
  for (std::size_t i = state.history.size() - span; i < state.history.size(); ++i)
    sum += state.history[i];
  const double smoothed = sum / static_cast<double>(span);

  if (smoothed < state.best_smoothed) {
    state.best_smoothed = smoothed;
    state.rounds_since_improvement = 0;
  } else {
    ++state.rounds_since_improvement;
  }
  return state.rounds_since_improvement >= state.patience;
}

}  // namespace cpfl::fl
