#include "cpfl/report/bound.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpfl/nn/loss.hpp"

namespace cpfl::report {

double hoeffding_term(int n, int K, double delta, std::int64_t m) {
  if (n < 1 || K < 1) throw std::invalid_argument("hoeffding_term: n and K must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("hoeffding_term: delta must be in (0,1)");
  if (m < 1) throw std::invalid_argument("hoeffding_term: m must be >= 1");
  return std::sqrt(std::log(2.0 * static_cast<double>(n) * static_cast<double>(K) / delta) /
                   (2.0 * static_cast<double>(m)));
}

double weighted_empirical_risk(const std::vector<std::vector<double>>& client_losses,
                               const std::vector<double>& cohort_weights) {
  if (client_losses.size() != cohort_weights.size())
    throw std::invalid_argument("weighted_empirical_risk: weight count mismatch");
  double risk = 0.0;
  for (std::size_t i = 0; i < client_losses.size(); ++i) {
    if (client_losses[i].empty())
      throw std::invalid_argument("weighted_empirical_risk: cohort has no client losses");
    double mean = 0.0;
    for (double loss : client_losses[i]) mean += loss;
    mean /= static_cast<double>(client_losses[i].size());
    risk += cohort_weights[i] * mean;
  }
  return risk;
}

BoundReport bound_report(const std::vector<sim::CohortModelBundle>& bundles,
                         const std::vector<std::vector<data::LabeledDataset>>& cohort_client_data,
                         const distill::WeightMatrix& weights, double delta) {
  if (bundles.size() != cohort_client_data.size() ||
      static_cast<int>(bundles.size()) != weights.teacher_count())
    throw std::invalid_argument("bound_report: bundles, datasets and weights are misaligned");

  // Scalar cohort weight: class-marginal mean of the per-class weights.
  std::vector<double> scalar(bundles.size());
  for (std::size_t i = 0; i < bundles.size(); ++i)
    scalar[i] = weights.p.row(static_cast<Eigen::Index>(i)).mean();

  std::vector<std::vector<double>> losses(bundles.size());
  std::int64_t min_m = std::numeric_limits<std::int64_t>::max();
  std::int64_t total_clients = 0;
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    for (const auto& dataset : cohort_client_data[i]) {
      if (dataset.size() == 0) continue;  // dataless clients carry no empirical risk
      losses[i].push_back(nn::evaluate(bundles[i].model, dataset).mean_loss);
      min_m = std::min(min_m, static_cast<std::int64_t>(dataset.size()));
      ++total_clients;
    }
    if (losses[i].empty())
      throw std::invalid_argument("bound_report: cohort " + std::to_string(i) +
                                  " has no client with data");
  }

  BoundReport report;
  report.delta = delta;
  report.m = min_m;
  report.risk_term = weighted_empirical_risk(losses, scalar);
  const std::int64_t mean_k =
      std::max<std::int64_t>(1, total_clients / static_cast<std::int64_t>(bundles.size()));
  report.hoeffding =
      hoeffding_term(static_cast<int>(bundles.size()), static_cast<int>(mean_k), delta, min_m);
  report.note =
      "partial bound: distribution-divergence and optimal-joint-risk terms require the "
      "unobservable target distribution and are omitted; m is the smallest non-empty client "
      "dataset";
  return report;
}

}  // namespace cpfl::report
