#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cpfl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// SplitMix64 finalizer, used to decorrelate derived seed streams.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed of an independent random stream identified by (base, salt). All
// randomized operations take seeds produced this way, so results are a pure
// function of the master seed regardless of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  return mix64(base ^ mix64(salt));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
  return derive_seed(base, fnv1a(tag));
}

// Seeded uniform permutation of [0, count).
std::vector<std::size_t> random_permutation(std::size_t count, std::uint64_t seed);

}  // namespace cpfl
