#include "bugrank/kernels.hpp"

namespace bugrank::kernels {

Gradients batch_gradients(const ModelParams& params, std::span<const ExampleList* const> batch,
                          const TrainConfig& config, std::uint64_t step, Execution ex) {
  return ex == Execution::Serial ? serial::batch_gradients(params, batch, config, step)
                                 : omp::batch_gradients(params, batch, config, step);
}

std::vector<std::vector<double>> score_lists(const ModelParams& params,
                                             std::span<const ExampleList> lists, Execution ex) {
  return ex == Execution::Serial ? serial::score_lists(params, lists)
                                 : omp::score_lists(params, lists);
}

std::vector<QueryMetrics> list_metrics(const ModelParams& params,
                                       std::span<const ExampleList> lists, Execution ex) {
  return ex == Execution::Serial ? serial::list_metrics(params, lists)
                                 : omp::list_metrics(params, lists);
}

}  // namespace bugrank::kernels
