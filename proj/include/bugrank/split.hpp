#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bugrank {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Shuffles the distinct groups and sends the first ceil(test_fraction * G)
/// of them to the test side, so rows of one group never straddle the split.
/// Indices come back in ascending order. Throws InvalidArgument for fewer
/// than two groups or a fraction outside (0, 1).
SplitIndices group_shuffle_split(std::span<const std::int64_t> groups, double test_fraction,
                                 std::uint64_t seed);

}  // namespace bugrank
