#include <algorithm>
#include <numeric>

#include "bugrank/error.hpp"
#include "bugrank/features.hpp"

namespace bugrank {

std::vector<RelevanceGrade> grade_answers(const std::vector<std::int64_t>& scores) {
  if (scores.empty()) throw InvalidArgument("grade_answers: empty score list");
  constexpr std::size_t kBuckets = 5;
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::vector<RelevanceGrade> grades(n);
  std::size_t pos = 0;
  for (std::size_t bucket = 0; bucket < kBuckets; ++bucket) {
    const std::size_t size = n / kBuckets + (bucket < n % kBuckets ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i, ++pos)
      grades[order[pos]] = static_cast<RelevanceGrade>(bucket + 1);
  }
  return grades;
}

}  // namespace bugrank
