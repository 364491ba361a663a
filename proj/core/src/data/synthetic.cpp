#include "cpfl/data/synthetic.hpp"

#include <random>
#include <stdexcept>

namespace cpfl::data {

LabeledDataset gen_synthetic(int classes, int dim, int samples_per_class, double cluster_spread,
                             std::uint64_t seed) {
  if (classes < 2) throw std::invalid_argument("gen_synthetic: classes must be >= 2");
  if (dim < 2) throw std::invalid_argument("gen_synthetic: dim must be >= 2");
  if (samples_per_class < 1) throw std::invalid_argument("gen_synthetic: samples_per_class must be >= 1");
  if (cluster_spread < 0.0) throw std::invalid_argument("gen_synthetic: cluster_spread must be >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix means(classes, dim);
  for (int c = 0; c < classes; ++c) {
    Vector direction(dim);
    do {
      for (int j = 0; j < dim; ++j) direction(j) = normal(rng);
    } while (direction.norm() == 0.0);
    means.row(c) = 4.0 * direction.transpose() / direction.norm();
  }

  LabeledDataset dataset;
  dataset.class_count = classes;
  const Eigen::Index n = static_cast<Eigen::Index>(classes) * samples_per_class;
  dataset.features.resize(n, dim);
  dataset.labels.reserve(static_cast<std::size_t>(n));
  Eigen::Index row = 0;
  for (int c = 0; c < classes; ++c) {
    for (int s = 0; s < samples_per_class; ++s, ++row) {
      for (int j = 0; j < dim; ++j)
        dataset.features(row, j) = means(c, j) + cluster_spread * normal(rng);
      dataset.labels.push_back(c);
    }
  }
  return dataset;
}

}  // namespace cpfl::data
