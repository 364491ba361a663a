#pragma once

#include <vector>

#include "cpfl/data/dataset.hpp"
#include "cpfl/nn/model.hpp"

namespace cpfl::nn {

struct LossGrad {
  Gradient gradient;
  double mean_loss = 0.0;
};

/// Softmax cross-entropy; labels are class indices in [0, classes).
LossGrad backward_ce(const MlpModel& model, const Matrix& batch, const std::vector<int>& labels);

/// Mean over the batch of the L1 distance between logits and fixed targets.
/// Subgradient convention: sign(0) = 0.
LossGrad backward_kd(const MlpModel& model, const Matrix& batch, const Matrix& target_logits);

double softmax_ce_loss(const Matrix& logits, const std::vector<int>& labels);

struct Evaluation {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

/// Top-1 accuracy (argmax ties resolve to the lowest class index) and mean
/// cross-entropy over a non-empty dataset.
Evaluation evaluate(const MlpModel& model, const data::LabeledDataset& dataset);

}  // namespace cpfl::nn
