#pragma once

#include <cstdint>
#include <vector>

namespace cpfl::sim {

/// One (cohort, round) accounting row. `loss_signal` is the mean validation
/// loss of reporting participants, or the mean train loss when no
/// participant holds a validation set.
struct RoundUsage {
  int cohort = 0;
  int round = 0;  // 1-based
  double duration_s = 0.0;
  double loss_signal = 0.0;
  double compute_s = 0.0;
  std::uint64_t bytes = 0;  // client traffic this round (download + upload)
};

struct ClientUsage {
  double compute_s = 0.0;
  std::uint64_t bytes_down = 0;
  std::uint64_t bytes_up = 0;
};

/// Simulated resource accounting. Totals are defined as ordered sums over
/// the per-round breakdown, so recomputation from the breakdown matches
/// reported totals exactly. The final model upload from each cohort server
/// to the global server is tracked per cohort, not per client.
struct ResourceLedger {
  std::vector<ClientUsage> clients;               // by global client id
  std::vector<RoundUsage> rounds;                 // grouped by cohort, round-ordered
  std::vector<std::uint64_t> final_upload_bytes;  // by cohort

  double total_compute_s() const;
  std::uint64_t total_bytes() const;  // round traffic + final uploads
  double cohort_compute_s(int cohort) const;
  std::uint64_t cohort_bytes(int cohort) const;  // round traffic + final upload
};

}  // namespace cpfl::sim
