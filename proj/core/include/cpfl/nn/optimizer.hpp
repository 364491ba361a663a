#pragma once

#include <cstdint>

#include "cpfl/nn/model.hpp"

namespace cpfl::nn {

enum class OptimizerKind { SgdMomentum, Adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::SgdMomentum;
  double learning_rate = 0.002;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static OptimizerConfig sgd(double lr, double momentum);
  static OptimizerConfig adam(double lr);
};

struct OptimizerState {
  OptimizerConfig config;
  Gradient velocity;       // SGD-momentum
  Gradient first_moment;   // Adam m
  Gradient second_moment;  // Adam v
  std::int64_t step_count = 0;

  static OptimizerState create(const OptimizerConfig& config, const MlpModel& model);
};

/// Classic momentum: v <- mu*v + g; theta <- theta - eta*v.
void sgd_step(MlpModel& model, OptimizerState& state, const Gradient& gradient);

/// Adam with bias correction.
void adam_step(MlpModel& model, OptimizerState& state, const Gradient& gradient);

/// Dispatch on state.config.kind.
void optimizer_step(MlpModel& model, OptimizerState& state, const Gradient& gradient);

}  // namespace cpfl::nn
