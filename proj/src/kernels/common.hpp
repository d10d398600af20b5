#pragma once

#include <algorithm>
#include <limits>
#include <numeric>

#include "bugrank/kernels.hpp"

namespace bugrank::kernels::detail {

inline Gradients list_gradients(const ModelParams& params, const ExampleList& list,
                                const TrainConfig& config, std::uint64_t step,
                                std::uint64_t slot) {
  auto g = Gradients::zeros_like(params);
  g.loss = list_loss_and_gradients(params, list, config, step, slot, &g);
  return g;
}

inline Gradients reduce(const ModelParams& params, const std::vector<Gradients>& parts) {
  auto total = Gradients::zeros_like(params);
  for (const auto& g : parts) total.add(g);
  if (!parts.empty()) total.scale(1.0 / static_cast<double>(parts.size()));
  return total;
}

// Padding slots get the lowest score and are never evaluated.
inline std::vector<double> list_scores(const ModelParams& params, const ExampleList& list) {
  std::vector<double> s(list.candidates.size(), std::numeric_limits<double>::lowest());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!list.candidates[i].is_pad()) s[i] = score(params, list.candidates[i]);
  return s;
}

// Ranks by score; equal scores fall back to ascending answer id.
inline QueryMetrics metrics_for(const ExampleList& list, const std::vector<double>& scores) {
  std::vector<std::size_t> by_id(list.candidates.size());
  std::iota(by_id.begin(), by_id.end(), 0);
  std::stable_sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
    return list.candidates[a].answer_id < list.candidates[b].answer_id;
  });
  std::vector<double> s;
  std::vector<int> labels;
  for (const auto i : by_id) {
    s.push_back(scores[i]);
    labels.push_back(list.candidates[i].label);
  }
  return query_metrics(rank_by_scores(s, labels));
}

}  // namespace bugrank::kernels::detail
