#include "cpfl/common.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace cpfl {

std::vector<std::size_t> random_permutation(std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> indices(count);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(indices.begin(), indices.end(), rng);
  return indices;
}

}  // namespace cpfl
