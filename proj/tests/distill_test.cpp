#include <random>

#include "cpfl/data/partition.hpp"
#include "cpfl/data/synthetic.hpp"
#include "cpfl/distill/distill.hpp"
#include "cpfl/nn/loss.hpp"
#include "doctest.h"

using namespace cpfl;

namespace {

nn::MlpModel constant_logit_model(int dim, std::vector<double> logits) {
  // Zero weights: the bias vector is the output for any input.
  auto model = nn::MlpModel::zeros({dim, static_cast<int>(logits.size())});
  for (std::size_t c = 0; c < logits.size(); ++c) model.biases[0](static_cast<Eigen::Index>(c)) = logits[c];
  return model;
}

}  // namespace

TEST_CASE("compute_weights: examples and the column-sum invariant") {
  SUBCASE("single cohort takes weight 1 everywhere") {
    const auto w = distill::compute_weights({data::LabelDistribution{{3, 5}}});
    CHECK(w.p(0, 0) == 1.0);
    CHECK(w.p(0, 1) == 1.0);
  }
  SUBCASE("disjoint specialists get one-hot columns") {
    const auto w = distill::compute_weights(
        {data::LabelDistribution{{10, 0}}, data::LabelDistribution{{0, 10}}});
    CHECK(w.p(0, 0) == 1.0);
    CHECK(w.p(1, 0) == 0.0);
    CHECK(w.p(0, 1) == 0.0);
    CHECK(w.p(1, 1) == 1.0);
  }
  SUBCASE("hand normalization per class") {
    const auto w = distill::compute_weights(
        {data::LabelDistribution{{3, 1}}, data::LabelDistribution{{1, 3}}});
    CHECK(w.p(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(w.p(1, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w.p(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w.p(1, 1) == doctest::Approx(0.75).epsilon(1e-15));
  }
  SUBCASE("zero-count class falls back to uniform") {
    const auto w = distill::compute_weights(
        {data::LabelDistribution{{4, 0}}, data::LabelDistribution{{4, 0}}});
    CHECK(w.p(0, 1) == 0.5);
    CHECK(w.p(1, 1) == 0.5);
  }
  SUBCASE("mismatched class counts are rejected") {
    CHECK_THROWS_AS((void)distill::compute_weights(
                        {data::LabelDistribution{{1, 2}}, data::LabelDistribution{{1, 2, 3}}}),
                    std::invalid_argument);
  }
  SUBCASE("class columns always sum to one") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<data::LabelDistribution> dists(2 + rng() % 6);
      const int classes = 2 + static_cast<int>(rng() % 8);
      for (auto& dist : dists) {
        dist.counts.resize(static_cast<std::size_t>(classes));
        for (auto& c : dist.counts) c = static_cast<std::int64_t>(rng() % 40);
      }
      const auto w = distill::compute_weights(dists);
      for (int c = 0; c < classes; ++c)
        CHECK(std::abs(w.p.col(c).sum() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("compute_scalar_weights: sample-share weighting") {
  const auto w = distill::compute_scalar_weights(
      {data::LabelDistribution{{6, 2}}, data::LabelDistribution{{1, 1}}});
  CHECK(w[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(0.2).epsilon(1e-15));
  const auto m = distill::scalar_to_matrix(w, 3);
  CHECK(m.p(0, 2) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("build_soft_targets: selection, equality, hand arithmetic") {
  data::UnlabeledDataset public_set;
  public_set.features = Matrix::Random(6, 3);

  SUBCASE("identical teachers reproduce the teacher logits") {
    const auto teacher = nn::MlpModel::glorot({3, 4, 2}, 5);
    const auto w = distill::compute_weights(
        {data::LabelDistribution{{2, 3}}, data::LabelDistribution{{4, 6}}});
    const auto targets = distill::build_soft_targets({teacher, teacher}, public_set, w);
    const Matrix expected = teacher.forward(public_set.features);
    CHECK((targets.logits - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("one-hot weights select a single teacher exactly") {
    const auto a = nn::MlpModel::glorot({3, 2}, 6);
    const auto b = nn::MlpModel::glorot({3, 2}, 7);
    distill::WeightMatrix w;
    w.p.resize(2, 2);
    w.p << 0.0, 0.0, 1.0, 1.0;
    const auto targets = distill::build_soft_targets({a, b}, public_set, w);
    CHECK((targets.logits - b.forward(public_set.features)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("hand-set two-teacher combination") {
    const auto a = constant_logit_model(3, {2.0, 0.0});
    const auto b = constant_logit_model(3, {0.0, 4.0});
    distill::WeightMatrix w;
    w.p.resize(2, 2);
    w.p << 0.75, 0.25, 0.25, 0.75;
    const auto targets = distill::build_soft_targets({a, b}, public_set, w);
    for (Eigen::Index r = 0; r < targets.logits.rows(); ++r) {
      CHECK(targets.logits(r, 0) == doctest::Approx(1.5).epsilon(1e-15));
      CHECK(targets.logits(r, 1) == doctest::Approx(3.0).epsilon(1e-15));
    }
  }
  SUBCASE("class-count mismatch between teachers is rejected") {
    const auto a = nn::MlpModel::glorot({3, 2}, 1);
    const auto b = nn::MlpModel::glorot({3, 3}, 2);
    distill::WeightMatrix w;
    w.p = Matrix::Constant(2, 2, 0.5);
    CHECK_THROWS_AS((void)distill::build_soft_targets({a, b}, public_set, w),
                    std::invalid_argument);
  }
}

TEST_CASE("build_soft_targets: linear in the teacher logits, permutation invariant") {
  data::UnlabeledDataset public_set;
  public_set.features = Matrix::Random(8, 4);
  std::vector<nn::MlpModel> teachers{nn::MlpModel::glorot({4, 5, 3}, 11),
                                     nn::MlpModel::glorot({4, 5, 3}, 12),
                                     nn::MlpModel::glorot({4, 5, 3}, 13)};
  const auto dists = std::vector<data::LabelDistribution>{
      {{5, 1, 2}}, {{1, 7, 2}}, {{2, 2, 9}}};
  const auto w = distill::compute_weights(dists);
  const auto base = distill::build_soft_targets(teachers, public_set, w);

  SUBCASE("scaling every teacher's logits by s scales the targets by s") {
    const double s = 2.5;
    auto scaled = teachers;
    for (auto& teacher : scaled) {
      teacher.weights.back() *= s;  // output layer scale => logits scale
      teacher.biases.back() *= s;
    }
    const auto scaled_targets = distill::build_soft_targets(scaled, public_set, w);
    CHECK((scaled_targets.logits - s * base.logits).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("permuting (teacher, weight-row) pairs leaves targets unchanged") {
    std::vector<nn::MlpModel> shuffled{teachers[2], teachers[0], teachers[1]};
    distill::WeightMatrix wp;
    wp.p.resize(3, 3);
    wp.p.row(0) = w.p.row(2);
    wp.p.row(1) = w.p.row(0);
    wp.p.row(2) = w.p.row(1);
    const auto permuted = distill::build_soft_targets(shuffled, public_set, wp);
    CHECK((permuted.logits - base.logits).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("train_student: a student equal to the single teacher stays put") {
  const auto teacher = nn::MlpModel::glorot({4, 6, 3}, 21);
  data::UnlabeledDataset public_set;
  public_set.features = Matrix::Random(40, 4);
  const auto w = distill::compute_weights({data::LabelDistribution{{5, 5, 5}}});
  const auto targets = distill::build_soft_targets({teacher}, public_set, w);

  distill::DistillSchedule schedule;
  schedule.epochs = 3;
  schedule.batch_size = 16;
  const auto result = distill::train_student(teacher, public_set, targets, schedule, 1);
  CHECK(nn::bitwise_equal(result.model, teacher));
  for (double loss : result.epoch_losses) CHECK(loss == 0.0);
}

TEST_CASE("train_student: longer schedules reach lower distillation loss") {
  const auto train = data::gen_synthetic(3, 4, 40, 0.6, 31);
  // teachers: two models trained implicitly via different inits is enough
  // for a regression target; what matters is the optimization behavior
  std::vector<nn::MlpModel> teachers{nn::MlpModel::glorot({4, 8, 3}, 1),
                                     nn::MlpModel::glorot({4, 8, 3}, 2)};
  data::UnlabeledDataset public_set;
  public_set.features = train.features;
  const auto w = distill::compute_weights(
      {data::label_distribution(train), data::label_distribution(train)});
  const auto targets = distill::build_soft_targets(teachers, public_set, w);
  const auto init = nn::MlpModel::glorot({4, 8, 3}, 99);

  distill::DistillSchedule one;
  one.epochs = 1;
  one.batch_size = 32;
  distill::DistillSchedule fifty;
  fifty.epochs = 50;
  fifty.batch_size = 32;

  const auto short_run = distill::train_student(init, public_set, targets, one, 7);
  const auto long_run = distill::train_student(init, public_set, targets, fifty, 7);
  CHECK(long_run.epoch_losses.front() == short_run.epoch_losses.front());  // same seed, same first epoch
  CHECK(long_run.epoch_losses.back() <= short_run.epoch_losses.back());
  CHECK(long_run.epoch_losses.back() <= long_run.epoch_losses.front());

  // training curve: allow small transient upticks only
  for (std::size_t e = 1; e < long_run.epoch_losses.size(); ++e)
    CHECK(long_run.epoch_losses[e] <= long_run.epoch_losses[e - 1] * 1.05);
}

TEST_CASE("train_student: oversized batch is clamped with a warning record") {
  const auto teacher = nn::MlpModel::glorot({3, 2}, 41);
  data::UnlabeledDataset public_set;
  public_set.features = Matrix::Random(10, 3);
  const auto w = distill::compute_weights({data::LabelDistribution{{1, 1}}});
  const auto targets = distill::build_soft_targets({teacher}, public_set, w);
  distill::DistillSchedule schedule;
  schedule.epochs = 1;
  schedule.batch_size = 512;
  const auto result =
      distill::train_student(nn::MlpModel::glorot({3, 2}, 5), public_set, targets, schedule, 3);
  CHECK(result.batch_clamped);
}

TEST_CASE("train_student rejects misaligned targets") {
  const auto init = nn::MlpModel::glorot({3, 2}, 1);
  data::UnlabeledDataset public_set;
  public_set.features = Matrix::Random(10, 3);
  distill::SoftTargets targets;
  targets.logits = Matrix::Zero(9, 2);
  CHECK_THROWS_AS((void)distill::train_student(init, public_set, targets, {}, 1),
                  std::invalid_argument);
}
