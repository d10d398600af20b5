#include "bugrank/kernels.hpp"
#include "common.hpp"

namespace bugrank::kernels::serial {

Gradients batch_gradients(const ModelParams& params, std::span<const ExampleList* const> batch,
                          const TrainConfig& config, std::uint64_t step) {
  std::vector<Gradients> parts;
  parts.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i)
    parts.push_back(detail::list_gradients(params, *batch[i], config, step, i));
  return detail::reduce(params, parts);
}

std::vector<std::vector<double>> score_lists(const ModelParams& params,
                                             std::span<const ExampleList> lists) {
  std::vector<std::vector<double>> out;
  out.reserve(lists.size());
  for (const auto& l : lists) out.push_back(detail::list_scores(params, l));
  return out;
}

std::vector<QueryMetrics> list_metrics(const ModelParams& params,
                                       std::span<const ExampleList> lists) {
  std::vector<QueryMetrics> out;
  out.reserve(lists.size());
  for (const auto& l : lists) out.push_back(detail::metrics_for(l, detail::list_scores(params, l)));
  return out;
}

std::vector<double> similarities(const QuestionIndex& index, const TfIdfVector& query,
                                 std::span<const std::size_t> slots) {
  std::vector<double> out(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) out[i] = cosine(query, index.vector_at(slots[i]));
  return out;
}

}  // namespace bugrank::kernels::serial
