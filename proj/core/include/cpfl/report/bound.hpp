#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpfl/data/dataset.hpp"
#include "cpfl/distill/distill.hpp"
#include "cpfl/sim/engine.hpp"

namespace cpfl::report {

/// sqrt(log(2nK/delta) / (2m)): the sample-complexity term of the risk bound.
double hoeffding_term(int n, int K, double delta, std::int64_t m);

/// sum_i p_i * mean_k losses[i][k], accumulated in index order.
double weighted_empirical_risk(const std::vector<std::vector<double>>& client_losses,
                               const std::vector<double>& cohort_weights);

struct BoundReport {
  double risk_term = 0.0;
  double hoeffding = 0.0;
  double delta = 0.0;
  std::int64_t m = 0;  // smallest non-empty client dataset
  std::string note;
};

/// Computable part of the risk bound for the fused model: the weighted
/// empirical risks of each cohort model on its own clients' data plus the
/// Hoeffding term. Scalar cohort weights come from the WeightMatrix by
/// class-marginal averaging. Distribution-divergence terms are not
/// estimable from observed data and are reported as omitted in `note`.
BoundReport bound_report(const std::vector<sim::CohortModelBundle>& bundles,
                         const std::vector<std::vector<data::LabeledDataset>>& cohort_client_data,
                         const distill::WeightMatrix& weights, double delta);

}  // namespace cpfl::report
