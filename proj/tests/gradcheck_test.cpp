#include <random>

#include "cpfl/nn/loss.hpp"
#include "cpfl/nn/optimizer.hpp"
#include "doctest.h"
#include "support/finite_diff.hpp"

using namespace cpfl;

TEST_CASE("cross-entropy gradients match central finite differences") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = test::make_instance(derive_seed(42, seed));
    const auto analytic = nn::backward_ce(inst.model, inst.batch, inst.labels).gradient;
    const auto numeric = test::finite_difference_gradient(
        inst.model,
        [&](const nn::MlpModel& m) { return nn::backward_ce(m, inst.batch, inst.labels).mean_loss; });
    CHECK(test::max_relative_error(analytic, numeric) < 1e-4);
  }
}

TEST_CASE("L1 gradients match finite differences away from kinks") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> offset(0.5, 1.5);
  std::bernoulli_distribution flip(0.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = test::make_instance(derive_seed(43, seed));
    // Targets displaced well off the residual kink in every coordinate.
    Matrix targets = inst.model.forward(inst.batch);
    for (Eigen::Index r = 0; r < targets.rows(); ++r)
      for (Eigen::Index c = 0; c < targets.cols(); ++c)
        targets(r, c) += flip(rng) ? offset(rng) : -offset(rng);

    const auto analytic = nn::backward_kd(inst.model, inst.batch, targets).gradient;
    const auto numeric = test::finite_difference_gradient(
        inst.model,
        [&](const nn::MlpModel& m) { return nn::backward_kd(m, inst.batch, targets).mean_loss; });
    CHECK(test::max_relative_error(analytic, numeric) < 1e-4);
  }
}

TEST_CASE("single-parameter perturbation matches first-order Taylor") {
  const auto inst = test::make_instance(99);
  const auto lg = nn::backward_ce(inst.model, inst.batch, inst.labels);
  const double eps = 1e-6;

  auto perturbed = inst.model;
  perturbed.weights[0](0, 0) += eps;
  const double moved = nn::backward_ce(perturbed, inst.batch, inst.labels).mean_loss;
  const double predicted = lg.mean_loss + lg.gradient.weights[0](0, 0) * eps;
  CHECK(moved == doctest::Approx(predicted).epsilon(1e-6));
}

TEST_CASE("one plain SGD step strictly decreases the batch loss") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto inst = test::make_instance(seed);
    auto lg = nn::backward_ce(inst.model, inst.batch, inst.labels);

    auto model = inst.model;
    auto state = nn::OptimizerState::create(nn::OptimizerConfig::sgd(1e-4, 0.0), model);
    nn::sgd_step(model, state, lg.gradient);
    const double after = nn::backward_ce(model, inst.batch, inst.labels).mean_loss;
    CHECK(after < lg.mean_loss);
  }
}
