#include <cmath>
#include <cstring>

#include "cpfl/nn/loss.hpp"
#include "cpfl/nn/model.hpp"
#include "cpfl/nn/optimizer.hpp"
#include "doctest.h"

using namespace cpfl;

namespace {

nn::MlpModel hand_net_222() {
  // 2-2-2 net with hand-set parameters; expected logits worked out on paper.
  auto model = nn::MlpModel::zeros({2, 2, 2});
  model.weights[0] << 1.0, -1.0, 0.5, 2.0;
  model.biases[0] << 0.1, -0.2;
  model.weights[1] << 1.0, 0.0, -1.0, 1.0;
  model.biases[1] << 0.0, 0.5;
  return model;
}

}  // namespace

TEST_CASE("forward: zero model produces zero logits") {
  const auto model = nn::MlpModel::zeros({3, 4, 2});
  Matrix batch(2, 3);
  batch << 1.0, -2.0, 3.0, 0.5, 0.0, -1.0;
  const Matrix logits = model.forward(batch);
  CHECK(logits.rows() == 2);
  CHECK(logits.cols() == 2);
  CHECK(logits.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("forward: single-layer identity maps I to I") {
  auto model = nn::MlpModel::zeros({3, 3});
  model.weights[0] = Matrix::Identity(3, 3);
  const Matrix logits = model.forward(Matrix::Identity(3, 3));
  CHECK((logits - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("forward: hand-computed 2-2-2 net") {
  const auto model = hand_net_222();
  Matrix batch(2, 2);
  batch << 1.0, 2.0, -1.0, 0.0;  // second row drives one hidden unit negative
  const Matrix logits = model.forward(batch);
  CHECK(logits(0, 0) == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(logits(0, 1) == doctest::Approx(3.3).epsilon(1e-12));
  CHECK(logits(1, 0) == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(logits(1, 1) == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("forward: dimension mismatch is rejected") {
  const auto model = nn::MlpModel::zeros({3, 2});
  CHECK_THROWS_AS((void)model.forward(Matrix::Zero(1, 4)), std::invalid_argument);
}

TEST_CASE("forward: deterministic across repeated calls") {
  const auto model = nn::MlpModel::glorot({5, 8, 3}, 77);
  Matrix batch = Matrix::Random(4, 5);
  const Matrix a = model.forward(batch);
  const Matrix b = model.forward(batch);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
}

TEST_CASE("parameter_count matches the closed form") {
  const auto model = nn::MlpModel::zeros({16, 64, 10});
  CHECK(model.parameter_count() == (16 + 1) * 64 + (64 + 1) * 10);
}

TEST_CASE("checkpoint round-trip is bit-exact") {
  auto model = nn::MlpModel::glorot({4, 7, 3}, 1234);
  model.weights[0](0, 0) = -0.0;
  model.weights[0](1, 1) = 1e-308;  // subnormal-adjacent
  model.biases[1](2) = 3.5;

  const auto bytes = model.serialize();
  CHECK(bytes.size() == 8 + 4 + 4 * 3 + 8 * model.parameter_count());
  CHECK(std::memcmp(bytes.data(), "CPFLMDL1", 8) == 0);

  const auto restored = nn::MlpModel::deserialize(bytes);
  CHECK(nn::bitwise_equal(model, restored));
  CHECK(restored.serialize() == bytes);
}

TEST_CASE("checkpoint rejects corrupt input") {
  auto bytes = nn::MlpModel::glorot({2, 2}, 1).serialize();
  SUBCASE("bad magic") {
    bytes[0] = 'X';
    CHECK_THROWS_AS((void)nn::MlpModel::deserialize(bytes), std::runtime_error);
  }
  SUBCASE("truncated payload") {
    bytes.pop_back();
    CHECK_THROWS_AS((void)nn::MlpModel::deserialize(bytes), std::runtime_error);
  }
}

TEST_CASE("backward_ce: uniform logits give ln(C)") {
  for (int classes : {2, 7, 10}) {
    const auto model = nn::MlpModel::zeros({3, classes});
    Matrix batch = Matrix::Random(5, 3);
    std::vector<int> labels(5, classes - 1);
    const auto lg = nn::backward_ce(model, batch, labels);
    CHECK(lg.mean_loss == doctest::Approx(std::log(static_cast<double>(classes))).epsilon(1e-12));
  }
}

TEST_CASE("backward_ce rejects out-of-range labels") {
  const auto model = nn::MlpModel::zeros({3, 4});
  Matrix batch = Matrix::Zero(2, 3);
  CHECK_THROWS_AS((void)nn::backward_ce(model, batch, {0, 4}), std::invalid_argument);
  CHECK_THROWS_AS((void)nn::backward_ce(model, batch, {-1, 0}), std::invalid_argument);
}

TEST_CASE("backward_kd: zero residual gives zero loss and zero gradient") {
  const auto model = nn::MlpModel::glorot({3, 5, 2}, 9);
  Matrix batch = Matrix::Random(4, 3);
  const Matrix targets = model.forward(batch);
  const auto lg = nn::backward_kd(model, batch, targets);
  CHECK(lg.mean_loss == 0.0);
  for (const auto& w : lg.gradient.weights) CHECK(w.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& b : lg.gradient.biases) CHECK(b.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("backward_kd: scalar L1 sign") {
  // z = w*x with w=2, x=1 -> z=2; target 5 -> loss 3, dL/dz = -1.
  auto model = nn::MlpModel::zeros({1, 1});
  model.weights[0](0, 0) = 2.0;
  Matrix batch(1, 1);
  batch << 1.0;
  Matrix target(1, 1);
  target << 5.0;
  const auto lg = nn::backward_kd(model, batch, target);
  CHECK(lg.mean_loss == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(lg.gradient.biases[0](0) == -1.0);   // dL/dz
  CHECK(lg.gradient.weights[0](0, 0) == -1.0);  // x * dL/dz
}

TEST_CASE("backward_kd rejects target shape mismatch") {
  const auto model = nn::MlpModel::zeros({2, 3});
  CHECK_THROWS_AS((void)nn::backward_kd(model, Matrix::Zero(2, 2), Matrix::Zero(2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)nn::backward_kd(model, Matrix::Zero(2, 2), Matrix::Zero(1, 3)),
                  std::invalid_argument);
}

TEST_CASE("sgd_step: plain gradient step with mu=0, eta=1") {
  auto model = nn::MlpModel::zeros({2, 1});
  auto state = nn::OptimizerState::create(nn::OptimizerConfig::sgd(1.0, 0.0), model);
  auto grad = nn::Gradient::zeros_like(model);
  grad.weights[0] << 1.0, 2.0;
  nn::sgd_step(model, state, grad);
  CHECK(model.weights[0](0, 0) == -1.0);
  CHECK(model.weights[0](1, 0) == -2.0);
  CHECK(state.step_count == 1);
}

TEST_CASE("sgd_step: zero gradient is a fixed point") {
  auto model = nn::MlpModel::glorot({3, 3}, 5);
  const auto before = model;
  auto state = nn::OptimizerState::create(nn::OptimizerConfig::sgd(0.5, 0.7), model);
  nn::sgd_step(model, state, nn::Gradient::zeros_like(model));
  CHECK(nn::bitwise_equal(model, before));
}

TEST_CASE("sgd_step: two momentum steps, hand-iterated") {
  auto model = nn::MlpModel::zeros({1, 1});
  auto state = nn::OptimizerState::create(nn::OptimizerConfig::sgd(0.1, 0.9), model);
  auto grad = nn::Gradient::zeros_like(model);
  grad.weights[0](0, 0) = 1.0;
  nn::sgd_step(model, state, grad);
  CHECK(model.weights[0](0, 0) == doctest::Approx(-0.1).epsilon(1e-15));
  nn::sgd_step(model, state, grad);
  CHECK(model.weights[0](0, 0) == doctest::Approx(-0.29).epsilon(1e-15));
}

TEST_CASE("sgd_step rejects wrong state kind and shapes") {
  auto model = nn::MlpModel::zeros({2, 2});
  auto adam_state = nn::OptimizerState::create(nn::OptimizerConfig::adam(0.001), model);
  CHECK_THROWS_AS(nn::sgd_step(model, adam_state, nn::Gradient::zeros_like(model)),
                  std::invalid_argument);
  auto state = nn::OptimizerState::create(nn::OptimizerConfig::sgd(0.1, 0.9), model);
  auto bad = nn::Gradient::zeros_like(nn::MlpModel::zeros({2, 3}));
  CHECK_THROWS_AS(nn::sgd_step(model, state, bad), std::invalid_argument);
}

TEST_CASE("adam_step: zero gradient at step 1 leaves the model unchanged") {
  auto model = nn::MlpModel::glorot({4, 2}, 11);
  const auto before = model;
  auto state = nn::OptimizerState::create(nn::OptimizerConfig::adam(0.001), model);
  nn::adam_step(model, state, nn::Gradient::zeros_like(model));
  CHECK(nn::bitwise_equal(model, before));
}

TEST_CASE("adam_step: bias-corrected first step is ~ -lr") {
  auto model = nn::MlpModel::zeros({1, 1});
  auto state = nn::OptimizerState::create(nn::OptimizerConfig::adam(0.001), model);
  auto grad = nn::Gradient::zeros_like(model);
  grad.weights[0](0, 0) = 1.0;
  nn::adam_step(model, state, grad);
  CHECK(std::abs(model.weights[0](0, 0) + 0.001) < 1e-9);

  SUBCASE("moments after two steps of g=1") {
    nn::adam_step(model, state, grad);
    CHECK(state.first_moment.weights[0](0, 0) == doctest::Approx(0.19).epsilon(1e-12));
    CHECK(state.second_moment.weights[0](0, 0) == doctest::Approx(0.001999).epsilon(1e-12));
    CHECK(state.step_count == 2);
  }
}

TEST_CASE("evaluate: constant predictor with tie-break to class 0") {
  const int classes = 4;
  const auto model = nn::MlpModel::zeros({3, classes});
  data::LabeledDataset balanced;
  balanced.class_count = classes;
  balanced.features = Matrix::Random(40, 3);
  for (int i = 0; i < 40; ++i) balanced.labels.push_back(i % classes);
  const auto eval = nn::evaluate(model, balanced);
  CHECK(eval.accuracy == doctest::Approx(1.0 / classes).epsilon(1e-15));
  CHECK(eval.mean_loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("evaluate: hand-built separator classifies blobs perfectly") {
  data::LabeledDataset blobs;
  blobs.class_count = 2;
  blobs.features.resize(20, 2);
  for (int i = 0; i < 20; ++i) {
    const int label = i % 2;
    blobs.features(i, 0) = (label == 0 ? -10.0 : 10.0) + 0.01 * i;
    blobs.features(i, 1) = 0.3 * i;
    blobs.labels.push_back(label);
  }
  auto model = nn::MlpModel::zeros({2, 2});
  model.weights[0](0, 0) = -1.0;  // logit 0 grows as x0 -> -inf
  model.weights[0](0, 1) = 1.0;
  CHECK(nn::evaluate(model, blobs).accuracy == 1.0);
}

TEST_CASE("evaluate: one-hot logits give the closed-form loss") {
  const int classes = 3;
  data::LabeledDataset onehot;
  onehot.class_count = classes;
  onehot.features = Matrix::Zero(9, classes);
  for (int i = 0; i < 9; ++i) {
    onehot.features(i, i % classes) = 1.0;
    onehot.labels.push_back(i % classes);
  }
  auto model = nn::MlpModel::zeros({classes, classes});
  model.weights[0] = Matrix::Identity(classes, classes);
  const auto eval = nn::evaluate(model, onehot);
  CHECK(eval.accuracy == 1.0);
  CHECK(eval.mean_loss ==
        doctest::Approx(std::log1p((classes - 1) * std::exp(-1.0))).epsilon(1e-12));
}

TEST_CASE("evaluate rejects an empty dataset") {
  const auto model = nn::MlpModel::zeros({2, 2});
  data::LabeledDataset empty;
  empty.class_count = 2;
  empty.features = Matrix::Zero(0, 2);
  CHECK_THROWS_AS((void)nn::evaluate(model, empty), std::invalid_argument);
}
