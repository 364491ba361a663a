#pragma once

#include <cstdint>
#include <vector>

#include "cpfl/common.hpp"

namespace cpfl::nn {

/// Dense feed-forward classifier: ReLU on hidden layers, identity on the
/// output layer (raw logits). weights[l] has shape
/// layer_dims[l] x layer_dims[l+1]; biases[l] has length layer_dims[l+1].
struct MlpModel {
  std::vector<int> layer_dims;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  int input_dim() const { return layer_dims.front(); }
  int class_count() const { return layer_dims.back(); }
  std::size_t layer_count() const { return weights.size(); }

  std::size_t parameter_count() const;
  bool same_shape(const MlpModel& other) const;

  /// Logits for a batch (one sample per row). Deterministic in (model, batch).
  Matrix forward(const Matrix& batch) const;

  /// Per-layer activations: [0] is the input, hidden entries are post-ReLU,
  /// back() is the logits.
  std::vector<Matrix> forward_activations(const Matrix& batch) const;

  /// Checkpoint format: magic "CPFLMDL1", u32 LE dim count, u32 LE dims,
  /// then every weight matrix (row-major, f64 LE) in layer order, then every
  /// bias vector in layer order. Round-trips are bit-exact.
  std::vector<std::uint8_t> serialize() const;
  static MlpModel deserialize(const std::vector<std::uint8_t>& bytes);

  static MlpModel zeros(std::vector<int> dims);
  /// Uniform init in +-sqrt(6/(fan_in+fan_out)), zero biases, seeded.
  static MlpModel glorot(std::vector<int> dims, std::uint64_t seed);
};

bool bitwise_equal(const MlpModel& a, const MlpModel& b);

/// Parameter-shaped buffer; used for gradients and optimizer moments.
struct Gradient {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  static Gradient zeros_like(const MlpModel& model);
};

}  // namespace cpfl::nn
