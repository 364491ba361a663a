#pragma once

#include <cstdint>
#include <vector>

namespace cpfl::fl {

/// Random split of the client population into near-equal cohorts
/// (sizes differ by at most 1).
struct CohortAssignment {
  int num_cohorts = 0;
  std::vector<int> membership;  // client id -> cohort index

  /// Client ids per cohort, ascending.
  std::vector<std::vector<int>> cohorts() const;
};

CohortAssignment partition_cohorts(int num_clients, int num_cohorts, std::uint64_t seed);

/// max(1, round(rate*K)) clients sampled without replacement, redrawn per
/// round: deterministic in (seed, round). Returned ids are ascending; with
/// rate = 1.0 this is the cohort in canonical order.
std::vector<int> sample_participants(const std::vector<int>& cohort_clients, double rate,
                                     int round, std::uint64_t seed);

}  // namespace cpfl::fl
