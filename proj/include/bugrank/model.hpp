#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bugrank/features.hpp"

namespace bugrank {

enum class FeatureSet { Embedding, EmbeddingDense };

std::string to_string(FeatureSet f);
FeatureSet feature_set_from_string(std::string_view s);

/// Hyperparameters. The scorer is pointwise (group size 1), the optimizer is
/// Adagrad and the loss is ApproxNDCG; those are fixed and only echoed.
struct TrainConfig {
  std::vector<std::size_t> layer_sizes{64, 32, 16};
  std::size_t embedding_dim = 32;
  std::size_t batch_size = 32;
  std::size_t steps = 15000;
  double learning_rate = 0.001;
  double dropout_rate = 0.0;
  std::size_t list_size = 50;
  std::size_t checkpoint_every = 1000;
  std::uint64_t seed = 42;
  double ndcg_temperature = 0.1;
  FeatureSet features = FeatureSet::Embedding;
  double adagrad_initial_accumulator = 0.1;
  double adagrad_epsilon = 1e-10;
  FeatureLimits limits;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// "exp1", "exp2" or "exp3".
TrainConfig preset(std::string_view name);

/// One query with exactly list_size candidates: real ones first, then PAD.
struct ExampleList {
  PostId query_id = 0;
  std::vector<CandidateFeatures> candidates;

  std::size_t real_count() const noexcept;
  std::vector<int> labels() const;
};

/// Truncates or pads to `list_size`. Throws InvalidArgument if no real
/// candidate remains.
ExampleList fit_list(ExampleList list, std::size_t list_size, const FeatureLimits& limits);

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;  ///< out x in, row-major
  std::vector<double> bias;    ///< out

  DenseLayer() = default;
  DenseLayer(std::size_t in_dim, std::size_t out_dim)
      : in(in_dim), out(out_dim), weight(in_dim * out_dim, 0.0), bias(out_dim, 0.0) {}
  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Per-field statistics of the transformed dense features. A stddev of 0
/// marks a field that was constant in training; it is fed to the model as 0.
struct Normalization {
  std::vector<double> mean;
  std::vector<double> stddev;
  friend bool operator==(const Normalization&, const Normalization&) = default;
};

/// log1p for count fields, identity otherwise.
double transform_dense(std::size_t field, double raw);
Normalization fit_normalization(std::span<const ExampleList> lists);

struct ModelParams {
  std::size_t vocab_size = 0;     ///< embedding rows = vocab_size + 1 (OOV)
  std::size_t embedding_dim = 0;
  bool use_dense = false;
  std::vector<double> embedding;  ///< (vocab_size + 1) x embedding_dim
  std::vector<DenseLayer> layers; ///< hidden layers, then the 1-unit output layer
  Normalization norm;
  std::uint64_t vocab_hash = 0;

  std::size_t input_dim() const noexcept;
  std::size_t hidden_count() const noexcept { return layers.empty() ? 0 : layers.size() - 1; }
  std::size_t parameter_count() const noexcept;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Glorot-uniform weights, zero biases, embeddings uniform in [-0.05, 0.05].
ModelParams init_params(const TrainConfig& config, std::size_t vocab_size,
                        std::uint64_t vocab_hash, Normalization norm);

/// Adagrad accumulators, same shapes as ModelParams.
struct AdagradState {
  std::vector<double> embedding;
  std::vector<DenseLayer> layers;
  friend bool operator==(const AdagradState&, const AdagradState&) = default;
};

AdagradState init_adagrad(const ModelParams& params, double initial_accumulator);

/// Identifies one candidate's dropout draws. Masks are a pure function of
/// these fields, so they do not depend on thread scheduling.
struct DropoutKey {
  double rate = 0;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  std::uint64_t list = 0;
  std::uint64_t candidate = 0;
};

/// Keep-scale for one hidden unit: 0 or 1/(1-rate).
double dropout_scale(const DropoutKey& key, std::size_t layer, std::size_t unit) noexcept;

/// Intermediate values kept for backpropagation.
struct ForwardCache {
  std::vector<double> input;
  std::vector<std::vector<double>> pre;   ///< pre-activation per hidden layer
  std::vector<std::vector<double>> post;  ///< post-dropout activation per hidden layer
  std::vector<std::vector<double>> scale; ///< dropout scale per hidden unit (1 in inference)
  std::size_t query_tokens = 0;
  std::size_t answer_tokens = 0;
  double output = 0;
};

/// Forward pass. `dropout` null means inference. Throws InvalidArgument on
/// dimension mismatch and NumericError when an activation is not finite.
double forward(const ModelParams& params, const CandidateFeatures& c, const DropoutKey* dropout,
               ForwardCache& cache);

double score(const ModelParams& params, const CandidateFeatures& c,
             const DropoutKey* dropout = nullptr);

/// Embedding gradient rows keyed by token id, kept in first-touch order.
class SparseRows {
 public:
  explicit SparseRows(std::size_t dim = 0) : dim_(dim) {}
  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return ids_.size(); }
  std::span<double> row(std::int32_t id);
  /// Zero span-equivalent (nullptr data) for rows never touched.
  const double* find(std::int32_t id) const;
  void add(const SparseRows& other);
  void scale(double s);
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
      fn(ids_[i], std::span<const double>(data_.data() + i * dim_, dim_));
  }

 private:
  std::size_t dim_;
  std::vector<std::int32_t> ids_;
  std::unordered_map<std::int32_t, std::size_t> slot_;
  std::vector<double> data_;
};

struct Gradients {
  SparseRows embedding;
  std::vector<DenseLayer> layers;
  double loss = 0;  ///< mean loss over the batch

  static Gradients zeros_like(const ModelParams& params);
  void add(const Gradients& other);
  void scale(double s);
};

/// Accumulates d(upstream * score)/d(params) for one candidate into `grad`.
void backward(const ModelParams& params, const CandidateFeatures& c, const ForwardCache& cache,
              double upstream, Gradients& grad);

/// Loss of one list and its gradient with respect to the real candidates'
/// scores, using Train-mode dropout keyed by (seed, step, list_slot).
double list_loss_and_gradients(const ModelParams& params, const ExampleList& list,
                               const TrainConfig& config, std::uint64_t step,
                               std::uint64_t list_slot, Gradients* grad);

/// Applies one Adagrad update: G += g^2; p -= lr * g / (sqrt(G) + eps).
void adagrad_update(ModelParams& params, AdagradState& state, const Gradients& grad,
                    double learning_rate, double epsilon);

}  // namespace bugrank
