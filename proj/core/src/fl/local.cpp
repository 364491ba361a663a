#include "cpfl/fl/local.hpp"

#include <stdexcept>

#include "cpfl/nn/loss.hpp"

namespace cpfl::fl {

namespace {

// Gather rows [begin, begin+len) of the index order into a contiguous batch,
// wrapping around the dataset in step mode.
struct BatchView {
  Matrix features;
  std::vector<int> labels;
};

BatchView gather(const data::LabeledDataset& data, const std::vector<std::size_t>& order,
                 std::size_t begin, std::size_t len, bool wrap) {
  BatchView batch;
  batch.features.resize(static_cast<Eigen::Index>(len), data.features.cols());
  batch.labels.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t pos = wrap ? (begin + i) % order.size() : begin + i;
    batch.features.row(static_cast<Eigen::Index>(i)) =
        data.features.row(static_cast<Eigen::Index>(order[pos]));
    batch.labels.push_back(data.labels[order[pos]]);
  }
  return batch;
}

}  // namespace

std::optional<LocalUpdateResult> local_update(const nn::MlpModel& model,
                                              const data::LabeledDataset& train_set,
                                              const LocalWork& work, int batch_size,
                                              const nn::OptimizerConfig& optimizer,
                                              std::uint64_t seed) {
  if (batch_size < 1) throw std::invalid_argument("local_update: batch_size must be >= 1");
  if (work.amount < 1) throw std::invalid_argument("local_update: work amount must be >= 1");
  const std::size_t n = train_set.size();
  if (n == 0) return std::nullopt;

  LocalUpdateResult result;
  result.model = model;
  auto state = nn::OptimizerState::create(optimizer, result.model);
  const std::size_t b = static_cast<std::size_t>(batch_size);

  double loss_sum = 0.0;
  std::size_t rows_seen = 0;

  if (work.mode == LocalWork::Mode::Epochs) {
    for (int epoch = 0; epoch < work.amount; ++epoch) {
      const auto order = random_permutation(n, derive_seed(seed, static_cast<std::uint64_t>(epoch)));
      for (std::size_t begin = 0; begin < n; begin += b) {
        const std::size_t len = std::min(b, n - begin);
        const auto batch = gather(train_set, order, begin, len, false);
        auto lg = nn::backward_ce(result.model, batch.features, batch.labels);
        nn::optimizer_step(result.model, state, lg.gradient);
        loss_sum += lg.mean_loss * static_cast<double>(len);
        rows_seen += len;
        ++result.batches;
      }
    }
  } else {
    const auto order = random_permutation(n, derive_seed(seed, std::uint64_t{0}));
    std::size_t cursor = 0;
    for (int step = 0; step < work.amount; ++step) {
      const std::size_t len = std::min(b, n);
      const auto batch = gather(train_set, order, cursor, len, true);
      cursor = (cursor + len) % n;
      auto lg = nn::backward_ce(result.model, batch.features, batch.labels);
      nn::optimizer_step(result.model, state, lg.gradient);
      loss_sum += lg.mean_loss * static_cast<double>(len);
      rows_seen += len;
      ++result.batches;
    }
  }

  result.train_loss = loss_sum / static_cast<double>(rows_seen);
  return result;
}

}  // namespace cpfl::fl
