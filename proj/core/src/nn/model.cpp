#include "cpfl/nn/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>
#include <string>

namespace cpfl::nn {

namespace {

constexpr char kMagic[8] = {'C', 'P', 'F', 'L', 'M', 'D', 'L', '1'};

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void append_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xff));
}

std::uint32_t read_u32(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[pos++]) << (8 * i);
  return v;
}

double read_f64(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[pos++]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void check_dims(const std::vector<int>& dims) {
  if (dims.size() < 2) throw std::invalid_argument("MlpModel: need at least input and output dims");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("MlpModel: layer dims must be positive");
}

}  // namespace

std::size_t MlpModel::parameter_count() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l)
    total += static_cast<std::size_t>(layer_dims[l] + 1) * static_cast<std::size_t>(layer_dims[l + 1]);
  return total;
}

bool MlpModel::same_shape(const MlpModel& other) const {
  return layer_dims == other.layer_dims;
}

Matrix MlpModel::forward(const Matrix& batch) const {
  return forward_activations(batch).back();
}

std::vector<Matrix> MlpModel::forward_activations(const Matrix& batch) const {
  if (batch.rows() < 1) throw std::invalid_argument("forward: batch must have at least one row");
  if (batch.cols() != input_dim())
    throw std::invalid_argument("forward: batch has " + std::to_string(batch.cols()) +
                                " columns, model expects " + std::to_string(input_dim()));
  std::vector<Matrix> acts;
  acts.reserve(weights.size() + 1);
  acts.push_back(batch);
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Matrix z = (acts.back() * weights[l]).rowwise() + biases[l].transpose();
    if (l + 1 < weights.size()) z = z.cwiseMax(0.0);
    acts.push_back(std::move(z));
  }
  return acts;
}

std::vector<std::uint8_t> MlpModel::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(8 + 4 + 4 * layer_dims.size() + 8 * parameter_count());
  for (char c : kMagic) out.push_back(static_cast<std::uint8_t>(c));
  append_u32(out, static_cast<std::uint32_t>(layer_dims.size()));
  for (int d : layer_dims) append_u32(out, static_cast<std::uint32_t>(d));
  for (const Matrix& w : weights)
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) append_f64(out, w(r, c));
  for (const Vector& b : biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) append_f64(out, b(i));
  return out;
}

MlpModel MlpModel::deserialize(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw std::runtime_error("model checkpoint: bad magic");
  std::size_t pos = 8;
  const std::uint32_t dim_count = read_u32(bytes, pos);
  if (dim_count < 2) throw std::runtime_error("model checkpoint: fewer than two layer dims");
  if (bytes.size() < pos + 4ull * dim_count) throw std::runtime_error("model checkpoint: truncated header");
  std::vector<int> dims(dim_count);
  for (auto& d : dims) {
    const std::uint32_t v = read_u32(bytes, pos);
    if (v == 0 || v > 0x7fffffffu) throw std::runtime_error("model checkpoint: invalid layer dim");
    d = static_cast<int>(v);
  }
  MlpModel model = zeros(dims);
  if (bytes.size() != pos + 8 * model.parameter_count())
    throw std::runtime_error("model checkpoint: payload size mismatch");
  for (Matrix& w : model.weights)
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = read_f64(bytes, pos);
  for (Vector& b : model.biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = read_f64(bytes, pos);
  return model;
}

MlpModel MlpModel::zeros(std::vector<int> dims) {
  check_dims(dims);
  MlpModel model;
  model.layer_dims = std::move(dims);
  for (std::size_t l = 0; l + 1 < model.layer_dims.size(); ++l) {
    model.weights.push_back(Matrix::Zero(model.layer_dims[l], model.layer_dims[l + 1]));
    model.biases.push_back(Vector::Zero(model.layer_dims[l + 1]));
  }
  return model;
}

MlpModel MlpModel::glorot(std::vector<int> dims, std::uint64_t seed) {
  MlpModel model = zeros(std::move(dims));
  std::mt19937_64 rng(seed);
  for (Matrix& w : model.weights) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
  }
  return model;
}

bool bitwise_equal(const MlpModel& a, const MlpModel& b) {
  if (!a.same_shape(b)) return false;
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    if (std::memcmp(a.weights[l].data(), b.weights[l].data(),
                    sizeof(double) * a.weights[l].size()) != 0)
      return false;
    if (std::memcmp(a.biases[l].data(), b.biases[l].data(),
                    sizeof(double) * a.biases[l].size()) != 0)
      return false;
  }
  return true;
}

Gradient Gradient::zeros_like(const MlpModel& model) {
  Gradient g;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    g.weights.push_back(Matrix::Zero(model.weights[l].rows(), model.weights[l].cols()));
    g.biases.push_back(Vector::Zero(model.biases[l].size()));
  }
  return g;
}

}  // namespace cpfl::nn
