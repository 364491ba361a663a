#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpfl/common.hpp"

namespace cpfl::data {

/// Feature matrix (one sample per row) with class labels in [0, class_count).
struct LabeledDataset {
  Matrix features;
  std::vector<int> labels;
  int class_count = 0;

  std::size_t size() const { return labels.size(); }
  LabeledDataset subset(const std::vector<std::size_t>& rows) const;
  void validate() const;
};

struct UnlabeledDataset {
  Matrix features;

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
};

/// Per-class sample counts for one dataset.
struct LabelDistribution {
  std::vector<std::int64_t> counts;

  int class_count() const { return static_cast<int>(counts.size()); }
  std::int64_t total() const;
};

// CSV with header `label,f0,f1,...`; unlabeled files omit the label column.
LabeledDataset load_labeled_csv(const std::string& path);
UnlabeledDataset load_unlabeled_csv(const std::string& path);
void save_labeled_csv(const LabeledDataset& dataset, const std::string& path);
void save_unlabeled_csv(const UnlabeledDataset& dataset, const std::string& path);

}  // namespace cpfl::data
