#include "cpfl/nn/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cpfl::nn {

namespace {

// Backpropagate dL/dlogits through the network given the forward activations.
Gradient backprop(const MlpModel& model, const std::vector<Matrix>& acts, Matrix delta) {
  Gradient grad = Gradient::zeros_like(model);
  for (std::size_t l = model.weights.size(); l-- > 0;) {
    grad.weights[l] = acts[l].transpose() * delta;
    grad.biases[l] = delta.colwise().sum();
    if (l > 0) {
      // ReLU mask: post-activation > 0 iff pre-activation > 0.
      const Matrix mask = (acts[l].array() > 0.0).cast<double>();
      delta = (delta * model.weights[l].transpose()).cwiseProduct(mask);
    }
  }
  return grad;
}

void check_labels(const std::vector<int>& labels, int classes, std::size_t batch_rows) {
  if (labels.empty() || labels.size() != batch_rows)
    throw std::invalid_argument("labels must match batch rows and be non-empty");
  for (int label : labels)
    if (label < 0 || label >= classes)
      throw std::invalid_argument("label " + std::to_string(label) + " out of [0, " +
                                  std::to_string(classes) + ")");
}

// Row-wise softmax probabilities, numerically stabilized.
Matrix softmax_rows(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double zmax = logits.row(r).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(r).array() - zmax).exp();
    p.row(r) = e / e.sum();
  }
  return p;
}

}  // namespace

double softmax_ce_loss(const Matrix& logits, const std::vector<int>& labels) {
  check_labels(labels, static_cast<int>(logits.cols()), static_cast<std::size_t>(logits.rows()));
  double total = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double zmax = logits.row(r).maxCoeff();
    const double lse = std::log((logits.row(r).array() - zmax).exp().sum());
    total += lse - (logits(r, labels[static_cast<std::size_t>(r)]) - zmax);
  }
  return total / static_cast<double>(logits.rows());
}

LossGrad backward_ce(const MlpModel& model, const Matrix& batch, const std::vector<int>& labels) {
  check_labels(labels, model.class_count(), static_cast<std::size_t>(batch.rows()));
  const auto acts = model.forward_activations(batch);
  const Matrix& logits = acts.back();
  const double invB = 1.0 / static_cast<double>(batch.rows());

  Matrix delta = softmax_rows(logits);
  for (Eigen::Index r = 0; r < delta.rows(); ++r) delta(r, labels[static_cast<std::size_t>(r)]) -= 1.0;
  delta *= invB;

  LossGrad out;
  out.mean_loss = softmax_ce_loss(logits, labels);
  out.gradient = backprop(model, acts, std::move(delta));
  return out;
}

LossGrad backward_kd(const MlpModel& model, const Matrix& batch, const Matrix& target_logits) {
  if (target_logits.rows() != batch.rows() || target_logits.cols() != model.class_count())
    throw std::invalid_argument("backward_kd: target logits shape mismatch");
  const auto acts = model.forward_activations(batch);
  const Matrix residual = acts.back() - target_logits;
  const double invB = 1.0 / static_cast<double>(batch.rows());

  Matrix delta = ((residual.array() > 0.0).cast<double>() - (residual.array() < 0.0).cast<double>()) * invB;

  LossGrad out;
  out.mean_loss = residual.array().abs().sum() * invB;
  out.gradient = backprop(model, acts, std::move(delta));
  return out;
}

Evaluation evaluate(const MlpModel& model, const data::LabeledDataset& dataset) {
  if (dataset.size() == 0) throw std::invalid_argument("evaluate: dataset is empty");
  const Matrix logits = model.forward(dataset.features);
  std::size_t correct = 0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c)
      if (logits(r, c) > logits(r, best)) best = c;
    if (best == dataset.labels[static_cast<std::size_t>(r)]) ++correct;
  }
  Evaluation eval;
  eval.accuracy = static_cast<double>(correct) / static_cast<double>(logits.rows());
  eval.mean_loss = softmax_ce_loss(logits, dataset.labels);
  return eval;
}

}  // namespace cpfl::nn
