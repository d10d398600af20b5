#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "bugrank/error.hpp"
#include "bugrank/split.hpp"

namespace bugrank {

SplitIndices group_shuffle_split(std::span<const std::int64_t> groups, double test_fraction,
                                 std::uint64_t seed) {
  if (!(test_fraction > 0 && test_fraction < 1))
    throw InvalidArgument("test fraction must be in (0, 1)");
  std::vector<std::int64_t> distinct(groups.begin(), groups.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw InvalidArgument("a group split needs at least two groups");

  // Fisher-Yates, unbiased bounded draw
  std::mt19937_64 rng(seed);
  for (std::size_t i = distinct.size() - 1; i > 0; --i) {
    const std::uint64_t bound = i + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do r = rng();
    while (r >= limit);
    std::swap(distinct[i], distinct[r % bound]);
  }
  auto n_test = static_cast<std::size_t>(
      std::ceil(test_fraction * static_cast<double>(distinct.size()) - 1e-9));
  n_test = std::clamp<std::size_t>(n_test, 1, distinct.size() - 1);
  std::map<std::int64_t, bool> is_test;
  for (std::size_t i = 0; i < distinct.size(); ++i) is_test[distinct[i]] = i < n_test;

  SplitIndices out;
  for (std::size_t i = 0; i < groups.size(); ++i)
    (is_test[groups[i]] ? out.test : out.train).push_back(i);
  return out;
}

}  // namespace bugrank
