#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bugrank/error.hpp"
#include "bugrank/kernels.hpp"
#include "bugrank/metrics.hpp"
#include "bugrank/model.hpp"

namespace bugrank {

/// Everything needed to resume or serve a model.
struct Checkpoint {
  TrainConfig config;
  ModelParams params;
  AdagradState optimizer;
  std::uint64_t step = 0;
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct CheckpointRecord {
  std::uint64_t step = 0;
  double train_loss = 0;  ///< mean batch loss since the previous checkpoint
  MetricReport eval;
};

struct TrainHistory {
  std::vector<CheckpointRecord> checkpoints;
  std::string to_json() const;
};

struct TrainResult {
  Checkpoint final;
  TrainHistory history;
};

class TrainingDiverged : public NumericError {
 public:
  TrainingDiverged(std::uint64_t step, std::uint64_t last_good_step)
      : NumericError("non-finite loss at step " + std::to_string(step) +
                     "; last good checkpoint at step " + std::to_string(last_good_step)),
        step_(step), last_good_step_(last_good_step) {}
  std::uint64_t step() const noexcept { return step_; }
  std::uint64_t last_good_step() const noexcept { return last_good_step_; }

 private:
  std::uint64_t step_;
  std::uint64_t last_good_step_;
};

using CheckpointHook = std::function<void(const Checkpoint&, const CheckpointRecord&)>;

struct TrainInputs {
  std::span<const ExampleList> train;
  std::span<const ExampleList> eval;  ///< may be empty; metrics then stay zero
  std::size_t vocab_size = 0;
  std::uint64_t vocab_hash = 0;
};

/// Minibatch Adagrad on the ApproxNDCG loss. Lists must already be fitted to
/// config.list_size. Deterministic for a fixed seed regardless of `ex`.
TrainResult train(const TrainInputs& inputs, const TrainConfig& config,
                  const CheckpointHook& on_checkpoint = {}, Execution ex = Execution::Parallel);

/// Mean loss and gradients over `batch` at the given step.
Gradients gradients(const ModelParams& params, std::span<const ExampleList* const> batch,
                    const TrainConfig& config, std::uint64_t step,
                    Execution ex = Execution::Parallel);

/// Scores in Infer mode, ranks, and averages the metrics.
MetricReport evaluate(const ModelParams& params, std::span<const ExampleList> lists,
                      Execution ex = Execution::Parallel);

/// Same with caller-supplied scores (one vector per list, real candidates only
/// or full length). Throws InvalidArgument on an empty set.
MetricReport evaluate_scores(std::span<const ExampleList> lists,
                             std::span<const std::vector<double>> scores);

}  // namespace bugrank
