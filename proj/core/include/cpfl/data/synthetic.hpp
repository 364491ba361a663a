#pragma once

#include <cstdint>

#include "cpfl/data/dataset.hpp"

namespace cpfl::data {

/// Gaussian-blob classification task: one blob per class, means drawn on the
/// unit sphere and scaled by 4, isotropic noise with the given spread.
/// Samples are ordered class-major. Deterministic in the seed.
LabeledDataset gen_synthetic(int classes, int dim, int samples_per_class, double cluster_spread,
                             std::uint64_t seed);

}  // namespace cpfl::data
