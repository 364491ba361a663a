#pragma once

#include <vector>

#include "cpfl/nn/model.hpp"

namespace cpfl::fl {

/// Elementwise weighted mean of parameter sets. Weights are normalized to
/// sum 1 first, then contributions are accumulated in list order (the exact
/// arithmetic is part of the contract so independent implementations can
/// reproduce results bitwise).
nn::MlpModel fedavg_aggregate(const std::vector<nn::MlpModel>& models,
                              const std::vector<double>& weights);

}  // namespace cpfl::fl
