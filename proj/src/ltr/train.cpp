#include <cmath>
#include <numeric>
#include <random>

#include <json.hpp>

#include "../kernels/common.hpp"
#include "bugrank/error.hpp"
#include "bugrank/train.hpp"

namespace bugrank {

namespace {

// Endless stream of list indices: one seeded permutation per pass.
class BatchSampler {
 public:
  BatchSampler(std::size_t n, std::uint64_t seed) : order_(n), rng_(seed ^ 0x5eed5a3b1e5ULL) {
    std::iota(order_.begin(), order_.end(), 0);
    shuffle();
  }

  std::size_t next() {
    if (pos_ == order_.size()) {
      shuffle();
      pos_ = 0;
    }
    return order_[pos_++];
  }

 private:
  void shuffle() {
    for (std::size_t i = order_.size(); i-- > 1;) {
      const std::uint64_t bound = i + 1;
      const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
      std::uint64_t r;
      do r = rng_();
      while (r >= limit);
      std::swap(order_[i], order_[r % bound]);
    }
  }

  std::vector<std::size_t> order_;
  std::mt19937_64 rng_;
  std::size_t pos_ = 0;
};

std::vector<ExampleList> fitted(std::span<const ExampleList> lists, const TrainConfig& config) {
  std::vector<ExampleList> out;
  out.reserve(lists.size());
  for (const auto& l : lists) out.push_back(fit_list(l, config.list_size, config.limits));
  return out;
}

}  // namespace

std::string TrainHistory::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& c : checkpoints) {
    nlohmann::ordered_json rec;
    rec["step"] = c.step;
    rec["train_loss"] = c.train_loss;
    rec["eval"] = nlohmann::ordered_json::parse(c.eval.to_json());
    j.push_back(std::move(rec));
  }
  return nlohmann::ordered_json{{"checkpoints", j}}.dump(2);
}

Gradients gradients(const ModelParams& params, std::span<const ExampleList* const> batch,
                    const TrainConfig& config, std::uint64_t step, Execution ex) {
  if (batch.empty()) throw InvalidArgument("gradient batch is empty");
  return kernels::batch_gradients(params, batch, config, step, ex);
}

MetricReport evaluate(const ModelParams& params, std::span<const ExampleList> lists,
                      Execution ex) {
  if (lists.empty()) throw InvalidArgument("cannot evaluate an empty test set");
  const auto per_query = kernels::list_metrics(params, lists, ex);
  return reduce_metrics(per_query);
}

MetricReport evaluate_scores(std::span<const ExampleList> lists,
                             std::span<const std::vector<double>> scores) {
  if (lists.empty()) throw InvalidArgument("cannot evaluate an empty test set");
  if (lists.size() != scores.size())
    throw InvalidArgument("one score vector per list is required");
  std::vector<QueryMetrics> per_query;
  per_query.reserve(lists.size());
  for (std::size_t q = 0; q < lists.size(); ++q) {
    const auto& list = lists[q];
    std::vector<double> full(list.candidates.size(), std::numeric_limits<double>::lowest());
    if (scores[q].size() == list.candidates.size()) {
      full = scores[q];
    } else if (scores[q].size() == list.real_count()) {
      std::size_t r = 0;
      for (std::size_t i = 0; i < full.size(); ++i)
        if (!list.candidates[i].is_pad()) full[i] = scores[q][r++];
    } else {
      throw InvalidArgument("score vector length does not match list " +
                            std::to_string(list.query_id));
    }
    per_query.push_back(kernels::detail::metrics_for(list, full));
  }
  return reduce_metrics(per_query);
}

TrainResult train(const TrainInputs& inputs, const TrainConfig& config,
                  const CheckpointHook& on_checkpoint, Execution ex) {
  config.validate();
  if (inputs.train.empty()) throw InvalidArgument("training set is empty");
  const auto train_lists = fitted(inputs.train, config);
  const auto eval_lists = fitted(inputs.eval, config);

  TrainResult result;
  auto& ckpt = result.final;
  ckpt.config = config;
  ckpt.params = init_params(config, inputs.vocab_size, inputs.vocab_hash,
                            fit_normalization(train_lists));
  ckpt.optimizer = init_adagrad(ckpt.params, config.adagrad_initial_accumulator);

  BatchSampler sampler(train_lists.size(), config.seed);
  std::vector<const ExampleList*> batch(config.batch_size);
  double loss_sum = 0;
  std::size_t loss_steps = 0;
  std::uint64_t last_good = 0;

  for (std::uint64_t step = 1; step <= config.steps; ++step) {
    for (auto& b : batch) b = &train_lists[sampler.next()];
    Gradients g;
    try {
      g = kernels::batch_gradients(ckpt.params, batch, config, step, ex);
    } catch (const NumericError&) {
      throw TrainingDiverged(step, last_good);
    }
    if (!std::isfinite(g.loss)) throw TrainingDiverged(step, last_good);
    adagrad_update(ckpt.params, ckpt.optimizer, g, config.learning_rate, config.adagrad_epsilon);
    ckpt.step = step;
    loss_sum += g.loss;
    ++loss_steps;

    if (step % config.checkpoint_every == 0 || step == config.steps) {
      CheckpointRecord rec;
      rec.step = step;
      rec.train_loss = loss_sum / static_cast<double>(loss_steps);
      if (!eval_lists.empty()) {
        try {
          rec.eval = evaluate(ckpt.params, eval_lists, ex);
        } catch (const NumericError&) {
          throw TrainingDiverged(step, last_good);
        }
      }
      loss_sum = 0;
      loss_steps = 0;
      if (on_checkpoint) on_checkpoint(ckpt, rec);
      result.history.checkpoints.push_back(std::move(rec));
      last_good = step;
    }
  }
  return result;
}

}  // namespace bugrank
