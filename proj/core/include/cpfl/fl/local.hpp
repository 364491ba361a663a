#pragma once

#include <cstdint>
#include <optional>

#include "cpfl/data/dataset.hpp"
#include "cpfl/nn/optimizer.hpp"

namespace cpfl::fl {

/// Amount of local work per round: whole epochs over the client data, or a
/// fixed number of mini-batch steps.
struct LocalWork {
  enum class Mode { Epochs, Steps };
  Mode mode = Mode::Epochs;
  int amount = 1;

  static LocalWork epochs(int count) { return {Mode::Epochs, count}; }
  static LocalWork steps(int count) { return {Mode::Steps, count}; }
};

struct LocalUpdateResult {
  nn::MlpModel model;
  double train_loss = 0.0;      // sample-weighted mean over executed batches
  std::size_t batches = 0;      // for resource accounting
};

/// One client round of local training starting from the received model.
/// Epoch mode reshuffles each epoch and runs ceil(N/B) batches per epoch;
/// step mode shuffles once and cycles through the data for exactly `amount`
/// batches. Optimizer state is fresh each call. Returns nullopt for an empty
/// train set (client skipped).
std::optional<LocalUpdateResult> local_update(const nn::MlpModel& model,
                                              const data::LabeledDataset& train_set,
                                              const LocalWork& work, int batch_size,
                                              const nn::OptimizerConfig& optimizer,
                                              std::uint64_t seed);

}  // namespace cpfl::fl
