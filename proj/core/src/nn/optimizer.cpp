#include "cpfl/nn/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace cpfl::nn {

namespace {

void check_shapes(const MlpModel& model, const Gradient& gradient) {
  if (gradient.weights.size() != model.weights.size() ||
      gradient.biases.size() != model.biases.size())
    throw std::invalid_argument("optimizer step: gradient layer count mismatch");
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    if (gradient.weights[l].rows() != model.weights[l].rows() ||
        gradient.weights[l].cols() != model.weights[l].cols() ||
        gradient.biases[l].size() != model.biases[l].size())
      throw std::invalid_argument("optimizer step: gradient shape mismatch");
  }
}

}  // namespace

OptimizerConfig OptimizerConfig::sgd(double lr, double momentum) {
  OptimizerConfig cfg;
  cfg.kind = OptimizerKind::SgdMomentum;
  cfg.learning_rate = lr;
  cfg.momentum = momentum;
  return cfg;
}

OptimizerConfig OptimizerConfig::adam(double lr) {
  OptimizerConfig cfg;
  cfg.kind = OptimizerKind::Adam;
  cfg.learning_rate = lr;
  return cfg;
}

OptimizerState OptimizerState::create(const OptimizerConfig& config, const MlpModel& model) {
  OptimizerState state;
  state.config = config;
  if (config.kind == OptimizerKind::SgdMomentum) {
    state.velocity = Gradient::zeros_like(model);
  } else {
    state.first_moment = Gradient::zeros_like(model);
    state.second_moment = Gradient::zeros_like(model);
  }
  return state;
}

void sgd_step(MlpModel& model, OptimizerState& state, const Gradient& gradient) {
  if (state.config.kind != OptimizerKind::SgdMomentum)
    throw std::invalid_argument("sgd_step: state is not SGD-momentum");
  check_shapes(model, gradient);
  const double mu = state.config.momentum;
  const double eta = state.config.learning_rate;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    state.velocity.weights[l] = mu * state.velocity.weights[l] + gradient.weights[l];
    model.weights[l] -= eta * state.velocity.weights[l];
    state.velocity.biases[l] = mu * state.velocity.biases[l] + gradient.biases[l];
    model.biases[l] -= eta * state.velocity.biases[l];
  }
  ++state.step_count;
}

void adam_step(MlpModel& model, OptimizerState& state, const Gradient& gradient) {
  if (state.config.kind != OptimizerKind::Adam)
    throw std::invalid_argument("adam_step: state is not Adam");
  check_shapes(model, gradient);
  const double lr = state.config.learning_rate;
  const double b1 = state.config.beta1;
  const double b2 = state.config.beta2;
  const double eps = state.config.epsilon;
  ++state.step_count;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    auto& m_w = state.first_moment.weights[l];
    auto& v_w = state.second_moment.weights[l];
    m_w = b1 * m_w + (1.0 - b1) * gradient.weights[l];
    v_w = b2 * v_w + (1.0 - b2) * gradient.weights[l].cwiseProduct(gradient.weights[l]);
    model.weights[l].array() -= lr * (m_w.array() / corr1) / ((v_w.array() / corr2).sqrt() + eps);

    auto& m_b = state.first_moment.biases[l];
    auto& v_b = state.second_moment.biases[l];
    m_b = b1 * m_b + (1.0 - b1) * gradient.biases[l];
    v_b = b2 * v_b + (1.0 - b2) * gradient.biases[l].cwiseProduct(gradient.biases[l]);
    model.biases[l].array() -= lr * (m_b.array() / corr1) / ((v_b.array() / corr2).sqrt() + eps);
  }
}

void optimizer_step(MlpModel& model, OptimizerState& state, const Gradient& gradient) {
  if (state.config.kind == OptimizerKind::SgdMomentum)
    sgd_step(model, state, gradient);
  else
    adam_step(model, state, gradient);
}

}  // namespace cpfl::nn
