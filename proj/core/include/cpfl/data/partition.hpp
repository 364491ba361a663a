#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cpfl/data/dataset.hpp"

namespace cpfl::data {

/// Dirichlet non-IID split: per class, a Dirichlet(alpha,...,alpha) vector
/// over clients is drawn and the class's samples are allotted proportionally
/// with largest-remainder rounding. Client datasets are disjoint and their
/// union equals the input. Deterministic in the seed.
std::vector<LabeledDataset> dirichlet_partition(const LabeledDataset& dataset, int num_clients,
                                                double alpha, std::uint64_t seed);

struct ValidationSplit {
  LabeledDataset train;
  std::optional<LabeledDataset> validation;  // absent below min_samples
};

/// Datasets under min_samples keep everything in train. Otherwise
/// max(1, round(fraction*N)) rows are sampled without replacement into the
/// validation set (half-up rounding).
ValidationSplit split_validation(const LabeledDataset& dataset, double fraction,
                                 std::size_t min_samples, std::uint64_t seed);

LabelDistribution label_distribution(const LabeledDataset& dataset);

/// Elementwise sum; all inputs must share the class count.
LabelDistribution aggregate_label_distributions(const std::vector<LabelDistribution>& dists);

}  // namespace cpfl::data
