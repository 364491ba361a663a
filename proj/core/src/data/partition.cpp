#include "cpfl/data/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cpfl::data {

std::vector<LabeledDataset> dirichlet_partition(const LabeledDataset& dataset, int num_clients,
                                                double alpha, std::uint64_t seed) {
  if (alpha <= 0.0) throw std::invalid_argument("dirichlet_partition: alpha must be > 0");
  if (num_clients < 1) throw std::invalid_argument("dirichlet_partition: num_clients must be >= 1");
  if (dataset.size() == 0) throw std::invalid_argument("dirichlet_partition: dataset is empty");

  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(alpha, 1.0);

  // Row indices per class, in dataset order.
  std::vector<std::vector<std::size_t>> class_rows(static_cast<std::size_t>(dataset.class_count));
  for (std::size_t i = 0; i < dataset.size(); ++i)
    class_rows[static_cast<std::size_t>(dataset.labels[i])].push_back(i);

  std::vector<std::vector<std::size_t>> client_rows(static_cast<std::size_t>(num_clients));
  for (const auto& rows : class_rows) {
    if (rows.empty()) continue;
    const std::size_t n = rows.size();

    // Dirichlet draw via normalized gammas.
    std::vector<double> shares(static_cast<std::size_t>(num_clients));
    double share_sum = 0.0;
    for (auto& s : shares) {
      s = gamma(rng);
      share_sum += s;
    }
    if (share_sum == 0.0) {
      shares.assign(shares.size(), 1.0);
      share_sum = static_cast<double>(num_clients);
    }

    // Largest-remainder rounding keeps the class total exact.
    std::vector<std::size_t> quota(shares.size());
    std::vector<std::pair<double, std::size_t>> remainders(shares.size());
    std::size_t assigned = 0;
    for (std::size_t j = 0; j < shares.size(); ++j) {
      const double exact = static_cast<double>(n) * shares[j] / share_sum;
      quota[j] = static_cast<std::size_t>(std::floor(exact));
      remainders[j] = {exact - std::floor(exact), j};
      assigned += quota[j];
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++quota[remainders[k].second];

    std::size_t cursor = 0;
    for (std::size_t j = 0; j < quota.size(); ++j)
      for (std::size_t q = 0; q < quota[j]; ++q) client_rows[j].push_back(rows[cursor++]);
  }

  std::vector<LabeledDataset> clients;
  clients.reserve(static_cast<std::size_t>(num_clients));
  for (auto& rows : client_rows) {
    std::sort(rows.begin(), rows.end());
    clients.push_back(dataset.subset(rows));
  }
  return clients;
}

ValidationSplit split_validation(const LabeledDataset& dataset, double fraction,
                                 std::size_t min_samples, std::uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0)
    throw std::invalid_argument("split_validation: fraction must be in (0,1)");

  const std::size_t n = dataset.size();
  ValidationSplit split;
  if (n < min_samples) {
    split.train = dataset;
    return split;
  }

  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5)));
  auto perm = random_permutation(n, seed);
  std::vector<std::size_t> val_rows(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::size_t> train_rows(perm.begin() + static_cast<std::ptrdiff_t>(k), perm.end());
  std::sort(val_rows.begin(), val_rows.end());
  std::sort(train_rows.begin(), train_rows.end());
  split.train = dataset.subset(train_rows);
  split.validation = dataset.subset(val_rows);
  return split;
}

LabelDistribution label_distribution(const LabeledDataset& dataset) {
  LabelDistribution dist;
  dist.counts.assign(static_cast<std::size_t>(dataset.class_count), 0);
  for (int label : dataset.labels) ++dist.counts[static_cast<std::size_t>(label)];
  return dist;
}

LabelDistribution aggregate_label_distributions(const std::vector<LabelDistribution>& dists) {
  if (dists.empty())
    throw std::invalid_argument("aggregate_label_distributions: need at least one distribution");
  LabelDistribution out;
  out.counts.assign(dists.front().counts.size(), 0);
  for (const auto& dist : dists) {
    if (dist.counts.size() != out.counts.size())
      throw std::invalid_argument("aggregate_label_distributions: class count mismatch");
    for (std::size_t c = 0; c < out.counts.size(); ++c) out.counts[c] += dist.counts[c];
  }
  return out;
}

}  // namespace cpfl::data
