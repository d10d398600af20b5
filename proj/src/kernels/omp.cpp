#include <exception>


#include "bugrank/kernels.hpp"
#include "common.hpp"

namespace bugrank::kernels::omp {

namespace {

// Runs fn(i) for i in [0, n) on the OpenMP team and rethrows the first
// exception (lowest index) on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Gradients batch_gradients(const ModelParams& params, std::span<const ExampleList* const> batch,
                          const TrainConfig& config, std::uint64_t step) {
  std::vector<Gradients> parts(batch.size());
  parallel_for(batch.size(), [&](std::size_t i) {
    parts[i] = detail::list_gradients(params, *batch[i], config, step, i);
  });
  return detail::reduce(params, parts);
}

std::vector<std::vector<double>> score_lists(const ModelParams& params,
                                             std::span<const ExampleList> lists) {
  std::vector<std::vector<double>> out(lists.size());
  parallel_for(lists.size(), [&](std::size_t i) { out[i] = detail::list_scores(params, lists[i]); });
  return out;
}

std::vector<QueryMetrics> list_metrics(const ModelParams& params,
                                       std::span<const ExampleList> lists) {
  std::vector<QueryMetrics> out(lists.size());
  parallel_for(lists.size(), [&](std::size_t i) {
    out[i] = detail::metrics_for(lists[i], detail::list_scores(params, lists[i]));
  });
  return out;
}

std::vector<double> similarities(const QuestionIndex& index, const TfIdfVector& query,
                                 std::span<const std::size_t> slots) {
  std::vector<double> out(slots.size());
  parallel_for(slots.size(),
               [&](std::size_t i) { out[i] = cosine(query, index.vector_at(slots[i])); });
  return out;
}

}  // namespace bugrank::kernels::omp
