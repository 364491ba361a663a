#include "cpfl/traces/traces.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cpfl::traces {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::vector<DeviceProfile> load_traces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ":1: missing header");
  if (line != "device_id,network_bytes_per_sec,compute_sec_per_batch")
    fail(path, 1, "unexpected header: " + line);

  std::vector<DeviceProfile> profiles;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    DeviceProfile p;
    std::string net, compute;
    if (!std::getline(row, p.device_id, ',') || !std::getline(row, net, ',') ||
        !std::getline(row, compute))
      fail(path, line_no, "expected 3 comma-separated fields");
    try {
      p.network_bytes_per_sec = std::stod(net);
      p.compute_sec_per_batch = std::stod(compute);
    } catch (const std::exception&) {
      fail(path, line_no, "non-numeric speed value");
    }
    if (!(p.network_bytes_per_sec > 0.0)) fail(path, line_no, "network_bytes_per_sec must be > 0");
    if (!(p.compute_sec_per_batch > 0.0)) fail(path, line_no, "compute_sec_per_batch must be > 0");
    profiles.push_back(std::move(p));
  }
  return profiles;
}

void save_traces(const std::vector<DeviceProfile>& profiles, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "device_id,network_bytes_per_sec,compute_sec_per_batch\n";
  char buf[128];
  for (const auto& p : profiles) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f", p.device_id.c_str(), p.network_bytes_per_sec,
                  p.compute_sec_per_batch);
    out << buf << "\n";
  }
}

std::vector<DeviceProfile> gen_traces(std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("gen_traces: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_net(std::log(kMinNetworkBytesPerSec),
                                                 std::log(kMaxNetworkBytesPerSec));
  std::uniform_real_distribution<double> compute(kMinComputeSecPerBatch, kMaxComputeSecPerBatch);
  std::vector<DeviceProfile> profiles;
  profiles.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    DeviceProfile p;
    p.device_id = "d" + std::to_string(i);
    p.network_bytes_per_sec = std::exp(log_net(rng));
    p.compute_sec_per_batch = compute(rng);
    profiles.push_back(std::move(p));
  }
  return profiles;
}

std::vector<DeviceProfile> assign_profiles(std::size_t num_clients,
                                           const std::vector<DeviceProfile>& profiles,
                                           std::uint64_t seed) {
  if (profiles.empty()) throw std::invalid_argument("assign_profiles: profile list is empty");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, profiles.size() - 1);
  std::vector<DeviceProfile> assignment;
  assignment.reserve(num_clients);
  for (std::size_t i = 0; i < num_clients; ++i) assignment.push_back(profiles[pick(rng)]);
  return assignment;
}

double client_round_duration(const DeviceProfile& profile, std::uint64_t model_bytes,
                             std::size_t num_batches) {
  const double transfer = static_cast<double>(model_bytes) / profile.network_bytes_per_sec;
  return transfer + static_cast<double>(num_batches) * profile.compute_sec_per_batch + transfer;
}

}  // namespace cpfl::traces
