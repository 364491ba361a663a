#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cpfl::traces {

struct DeviceProfile {
  std::string device_id;
  double network_bytes_per_sec = 0.0;  // > 0
  double compute_sec_per_batch = 0.0;  // > 0
};

// Sampling envelope of the generator.
inline constexpr double kMinNetworkBytesPerSec = 130.0e3;
inline constexpr double kMaxNetworkBytesPerSec = 26.0e6;
inline constexpr double kMinComputeSecPerBatch = 0.9;
inline constexpr double kMaxComputeSecPerBatch = 11.9;

/// Trace file format: CSV with header
/// `device_id,network_bytes_per_sec,compute_sec_per_batch`.
/// Malformed rows and non-positive values fail with the line number.
std::vector<DeviceProfile> load_traces(const std::string& path);
void save_traces(const std::vector<DeviceProfile>& profiles, const std::string& path);

/// Log-uniform network speed, uniform compute speed, inside the envelope.
std::vector<DeviceProfile> gen_traces(std::size_t count, std::uint64_t seed);

/// One profile per client, sampled with replacement.
std::vector<DeviceProfile> assign_profiles(std::size_t num_clients,
                                           const std::vector<DeviceProfile>& profiles,
                                           std::uint64_t seed);

/// Serial download + compute + upload:
/// model_bytes/net + num_batches*sec_per_batch + model_bytes/net.
double client_round_duration(const DeviceProfile& profile, std::uint64_t model_bytes,
                             std::size_t num_batches);

}  // namespace cpfl::traces
