#include "cpfl/fl/fedavg.hpp"

#include <stdexcept>

namespace cpfl::fl {

nn::MlpModel fedavg_aggregate(const std::vector<nn::MlpModel>& models,
                              const std::vector<double>& weights) {
  if (models.empty()) throw std::invalid_argument("fedavg_aggregate: no updates");
  if (models.size() != weights.size())
    throw std::invalid_argument("fedavg_aggregate: weight count mismatch");

  double weight_sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("fedavg_aggregate: weights must be > 0");
    weight_sum += w;
  }

  nn::MlpModel result = nn::MlpModel::zeros(models.front().layer_dims);
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (!models[i].same_shape(result))
      throw std::invalid_argument("fedavg_aggregate: model shape mismatch");
    const double a = weights[i] / weight_sum;
    for (std::size_t l = 0; l < result.weights.size(); ++l) {
      result.weights[l] += a * models[i].weights[l];
      result.biases[l] += a * models[i].biases[l];
    }
  }
  return result;
}

}  // namespace cpfl::fl
