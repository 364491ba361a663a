#pragma once

#include <cstdint>
#include <vector>

#include "cpfl/data/dataset.hpp"
#include "cpfl/nn/model.hpp"

namespace cpfl::distill {

/// Per-teacher, per-class aggregation weights; every class column sums to 1.
struct WeightMatrix {
  Matrix p;  // teachers x classes

  int teacher_count() const { return static_cast<int>(p.rows()); }
  int class_count() const { return static_cast<int>(p.cols()); }
};

/// p[i][c] = counts_i[c] / sum_j counts_j[c]; classes with zero total count
/// fall back to uniform 1/n.
WeightMatrix compute_weights(const std::vector<data::LabelDistribution>& dists);

/// Scalar alternative: each teacher weighted by its share of all samples.
std::vector<double> compute_scalar_weights(const std::vector<data::LabelDistribution>& dists);

WeightMatrix scalar_to_matrix(const std::vector<double>& weights, int classes);

/// Aggregated teacher logits over the public set: for each sample,
/// z[c] = sum_i p[i][c] * teacher_i_logits[c]. Teacher logits are computed
/// once per teacher.
struct SoftTargets {
  Matrix logits;  // public-set size x classes
};

SoftTargets build_soft_targets(const std::vector<nn::MlpModel>& teachers,
                               const data::UnlabeledDataset& public_set,
                               const WeightMatrix& weights);

struct DistillSchedule {
  int epochs = 50;
  int batch_size = 512;
  double learning_rate = 0.001;  // Adam
};

struct StudentResult {
  nn::MlpModel model;
  std::vector<double> epoch_losses;  // training-curve mean L1 per epoch
  bool batch_clamped = false;        // batch size exceeded the public set
};

/// Trains the student on the soft targets with mini-batch Adam over seeded
/// shuffles of the public set.
StudentResult train_student(const nn::MlpModel& init, const data::UnlabeledDataset& public_set,
                            const SoftTargets& targets, const DistillSchedule& schedule,
                            std::uint64_t seed);

void save_soft_targets_csv(const SoftTargets& targets, const std::string& path);

}  // namespace cpfl::distill
