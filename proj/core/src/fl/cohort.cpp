#include "cpfl/fl/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpfl/common.hpp"

namespace cpfl::fl {

std::vector<std::vector<int>> CohortAssignment::cohorts() const {
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(num_cohorts));
  for (std::size_t client = 0; client < membership.size(); ++client)
    groups[static_cast<std::size_t>(membership[client])].push_back(static_cast<int>(client));
  return groups;  // ascending by construction
}

CohortAssignment partition_cohorts(int num_clients, int num_cohorts, std::uint64_t seed) {
  if (num_cohorts < 1 || num_cohorts > num_clients)
    throw std::invalid_argument("partition_cohorts: need 1 <= num_cohorts <= num_clients");

  const auto perm = random_permutation(static_cast<std::size_t>(num_clients), seed);
  CohortAssignment assignment;
  assignment.num_cohorts = num_cohorts;
  assignment.membership.assign(static_cast<std::size_t>(num_clients), 0);

  // First (num_clients % num_cohorts) cohorts take the larger size.
  const int base = num_clients / num_cohorts;
  const int extra = num_clients % num_cohorts;
  std::size_t cursor = 0;
  for (int cohort = 0; cohort < num_cohorts; ++cohort) {
    const int size = base + (cohort < extra ? 1 : 0);
    for (int k = 0; k < size; ++k) assignment.membership[perm[cursor++]] = cohort;
  }
  return assignment;
}

std::vector<int> sample_participants(const std::vector<int>& cohort_clients, double rate,
                                     int round, std::uint64_t seed) {
  if (cohort_clients.empty()) throw std::invalid_argument("sample_participants: cohort is empty");
  if (rate <= 0.0 || rate > 1.0)
    throw std::invalid_argument("sample_participants: rate must be in (0,1]");

  const std::size_t k = cohort_clients.size();
  const std::size_t count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(rate * static_cast<double>(k) + 0.5)));
  if (count >= k) return cohort_clients;

  const auto perm = random_permutation(k, derive_seed(seed, static_cast<std::uint64_t>(round)));
  std::vector<int> picked;
  picked.reserve(count);
  for (std::size_t i = 0; i < count; ++i) picked.push_back(cohort_clients[perm[i]]);
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace cpfl::fl
