#include "cpfl/sim/ledger.hpp"

namespace cpfl::sim {

double ResourceLedger::total_compute_s() const {
  double total = 0.0;
  for (const auto& row : rounds) total += row.compute_s;
  return total;
}

std::uint64_t ResourceLedger::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& row : rounds) total += row.bytes;
  for (std::uint64_t b : final_upload_bytes) total += b;
  return total;
}

double ResourceLedger::cohort_compute_s(int cohort) const {
  double total = 0.0;
  for (const auto& row : rounds)
    if (row.cohort == cohort) total += row.compute_s;
  return total;
}

std::uint64_t ResourceLedger::cohort_bytes(int cohort) const {
  std::uint64_t total = 0;
  for (const auto& row : rounds)
    if (row.cohort == cohort) total += row.bytes;
  if (cohort >= 0 && static_cast<std::size_t>(cohort) < final_upload_bytes.size())
    total += final_upload_bytes[static_cast<std::size_t>(cohort)];
  return total;
}

}  // namespace cpfl::sim
