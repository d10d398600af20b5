#pragma once

// Data-parallel kernels. Each one has a serial reference and an OpenMP
// version; the two must agree bit for bit, since every per-item result is
// computed independently and reduced in item order.

#include <cstdint>
#include <span>
#include <vector>

#include "bugrank/execution.hpp"
#include "bugrank/metrics.hpp"
#include "bugrank/model.hpp"
#include "bugrank/tfidf.hpp"

namespace bugrank {

namespace kernels {

namespace serial {
Gradients batch_gradients(const ModelParams& params, std::span<const ExampleList* const> batch,
                          const TrainConfig& config, std::uint64_t step);
std::vector<std::vector<double>> score_lists(const ModelParams& params,
                                             std::span<const ExampleList> lists);
std::vector<QueryMetrics> list_metrics(const ModelParams& params,
                                       std::span<const ExampleList> lists);
std::vector<double> similarities(const QuestionIndex& index, const TfIdfVector& query,
                                 std::span<const std::size_t> slots);
}  // namespace serial

namespace omp {
Gradients batch_gradients(const ModelParams& params, std::span<const ExampleList* const> batch,
                          const TrainConfig& config, std::uint64_t step);
std::vector<std::vector<double>> score_lists(const ModelParams& params,
                                             std::span<const ExampleList> lists);
std::vector<QueryMetrics> list_metrics(const ModelParams& params,
                                       std::span<const ExampleList> lists);
std::vector<double> similarities(const QuestionIndex& index, const TfIdfVector& query,
                                 std::span<const std::size_t> slots);
}  // namespace omp

// Dispatchers.
Gradients batch_gradients(const ModelParams& params, std::span<const ExampleList* const> batch,
                          const TrainConfig& config, std::uint64_t step, Execution ex);
std::vector<std::vector<double>> score_lists(const ModelParams& params,
                                             std::span<const ExampleList> lists, Execution ex);
std::vector<QueryMetrics> list_metrics(const ModelParams& params,
                                       std::span<const ExampleList> lists, Execution ex);

}  // namespace kernels
}  // namespace bugrank
