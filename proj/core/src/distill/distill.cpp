#include "cpfl/distill/distill.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "cpfl/nn/loss.hpp"
#include "cpfl/nn/optimizer.hpp"

namespace cpfl::distill {

WeightMatrix compute_weights(const std::vector<data::LabelDistribution>& dists) {
  if (dists.empty()) throw std::invalid_argument("compute_weights: no distributions");
  const int classes = dists.front().class_count();
  const int n = static_cast<int>(dists.size());
  for (const auto& dist : dists)
    if (dist.class_count() != classes)
      throw std::invalid_argument("compute_weights: class count mismatch");

  WeightMatrix weights;
  weights.p.resize(n, classes);
  for (int c = 0; c < classes; ++c) {
    std::int64_t total = 0;
    for (const auto& dist : dists) total += dist.counts[static_cast<std::size_t>(c)];
    for (int i = 0; i < n; ++i)
      weights.p(i, c) = (total == 0)
                            ? 1.0 / static_cast<double>(n)
                            : static_cast<double>(dists[static_cast<std::size_t>(i)]
                                                      .counts[static_cast<std::size_t>(c)]) /
                                  static_cast<double>(total);
  }
  return weights;
}

std::vector<double> compute_scalar_weights(const std::vector<data::LabelDistribution>& dists) {
  if (dists.empty()) throw std::invalid_argument("compute_scalar_weights: no distributions");
  std::int64_t total = 0;
  for (const auto& dist : dists) total += dist.total();
  std::vector<double> weights(dists.size());
  for (std::size_t i = 0; i < dists.size(); ++i)
    weights[i] = (total == 0) ? 1.0 / static_cast<double>(dists.size())
                              : static_cast<double>(dists[i].total()) / static_cast<double>(total);
  return weights;
}

WeightMatrix scalar_to_matrix(const std::vector<double>& weights, int classes) {
  if (weights.empty()) throw std::invalid_argument("scalar_to_matrix: no weights");
  if (classes < 1) throw std::invalid_argument("scalar_to_matrix: classes must be >= 1");
  WeightMatrix out;
  out.p.resize(static_cast<Eigen::Index>(weights.size()), classes);
  for (std::size_t i = 0; i < weights.size(); ++i)
    out.p.row(static_cast<Eigen::Index>(i)).setConstant(weights[i]);
  return out;
}

SoftTargets build_soft_targets(const std::vector<nn::MlpModel>& teachers,
                               const data::UnlabeledDataset& public_set,
                               const WeightMatrix& weights) {
  if (teachers.empty()) throw std::invalid_argument("build_soft_targets: no teachers");
  if (weights.teacher_count() != static_cast<int>(teachers.size()))
    throw std::invalid_argument("build_soft_targets: weight rows must match teacher count");
  if (public_set.size() == 0) throw std::invalid_argument("build_soft_targets: empty public set");
  const int classes = teachers.front().class_count();
  for (const auto& teacher : teachers)
    if (teacher.class_count() != classes)
      throw std::invalid_argument("build_soft_targets: teacher class count mismatch");
  if (weights.class_count() != classes)
    throw std::invalid_argument("build_soft_targets: weight columns must match class count");

  SoftTargets targets;
  targets.logits = Matrix::Zero(public_set.features.rows(), classes);
  for (std::size_t i = 0; i < teachers.size(); ++i) {
    const Matrix logits = teachers[i].forward(public_set.features);
    targets.logits += logits * weights.p.row(static_cast<Eigen::Index>(i)).asDiagonal();
  }
  return targets;
}

StudentResult train_student(const nn::MlpModel& init, const data::UnlabeledDataset& public_set,
                            const SoftTargets& targets, const DistillSchedule& schedule,
                            std::uint64_t seed) {
  const std::size_t n = public_set.size();
  if (n == 0) throw std::invalid_argument("train_student: empty public set");
  if (targets.logits.rows() != public_set.features.rows())
    throw std::invalid_argument("train_student: targets not aligned with public set");
  if (targets.logits.cols() != init.class_count())
    throw std::invalid_argument("train_student: targets class count mismatch");
  if (schedule.epochs < 1 || schedule.batch_size < 1 || schedule.learning_rate <= 0.0)
    throw std::invalid_argument("train_student: invalid schedule");

  StudentResult result;
  result.model = init;
  std::size_t batch = static_cast<std::size_t>(schedule.batch_size);
  if (batch > n) {
    batch = n;
    result.batch_clamped = true;
  }

  auto state = nn::OptimizerState::create(nn::OptimizerConfig::adam(schedule.learning_rate),
                                          result.model);
  Matrix batch_features(static_cast<Eigen::Index>(batch), public_set.features.cols());
  Matrix batch_targets(static_cast<Eigen::Index>(batch), targets.logits.cols());

  for (int epoch = 0; epoch < schedule.epochs; ++epoch) {
    const auto order = random_permutation(n, derive_seed(seed, static_cast<std::uint64_t>(epoch)));
    double loss_sum = 0.0;
    std::size_t rows_seen = 0;
    for (std::size_t begin = 0; begin < n; begin += batch) {
      const std::size_t len = std::min(batch, n - begin);
      for (std::size_t i = 0; i < len; ++i) {
        batch_features.row(static_cast<Eigen::Index>(i)) =
            public_set.features.row(static_cast<Eigen::Index>(order[begin + i]));
        batch_targets.row(static_cast<Eigen::Index>(i)) =
            targets.logits.row(static_cast<Eigen::Index>(order[begin + i]));
      }
      auto lg = nn::backward_kd(result.model, batch_features.topRows(static_cast<Eigen::Index>(len)),
                                batch_targets.topRows(static_cast<Eigen::Index>(len)));
      nn::adam_step(result.model, state, lg.gradient);
      loss_sum += lg.mean_loss * static_cast<double>(len);
      rows_seen += len;
    }
    result.epoch_losses.push_back(loss_sum / static_cast<double>(rows_seen));
  }
  return result;
}

void save_soft_targets_csv(const SoftTargets& targets, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  for (Eigen::Index c = 0; c < targets.logits.cols(); ++c) out << (c ? "," : "") << "t" << c;
  out << "\n";
  char buf[64];
  for (Eigen::Index r = 0; r < targets.logits.rows(); ++r) {
    for (Eigen::Index c = 0; c < targets.logits.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.6f", targets.logits(r, c));
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace cpfl::distill
