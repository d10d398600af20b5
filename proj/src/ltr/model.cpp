#include <algorithm>
#include <cmath>
#include <random>

#include "bugrank/approx_ndcg.hpp"
#include "bugrank/error.hpp"
#include "bugrank/model.hpp"

namespace bugrank {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng()); }

void check_finite(const std::vector<double>& v, std::size_t layer) {
  for (const double x : v)
    if (!std::isfinite(x))
      throw NumericError("non-finite activation in layer " + std::to_string(layer));
}

// Mean of the embedding rows of the non-pad ids; returns the count used.
std::size_t pool(const ModelParams& p, const std::vector<std::int32_t>& ids, double* out) {
  const std::size_t rows = p.vocab_size + 1;
  std::size_t n = 0;
  std::fill(out, out + p.embedding_dim, 0.0);
  for (const auto id : ids) {
    if (id == kPadToken) continue;
    if (id < 0 || static_cast<std::size_t>(id) >= rows)
      throw InvalidArgument("token id " + std::to_string(id) + " outside the embedding table");
    const double* row = p.embedding.data() + static_cast<std::size_t>(id) * p.embedding_dim;
    for (std::size_t e = 0; e < p.embedding_dim; ++e) out[e] += row[e];
    ++n;
  }
  if (n > 0)
    for (std::size_t e = 0; e < p.embedding_dim; ++e) out[e] /= static_cast<double>(n);
  return n;
}

}  // namespace

std::string to_string(FeatureSet f) {
  return f == FeatureSet::Embedding ? "embedding" : "embedding+dense";
}

FeatureSet feature_set_from_string(std::string_view s) {
  if (s == "embedding") return FeatureSet::Embedding;
  if (s == "embedding+dense" || s == "dense") return FeatureSet::EmbeddingDense;
  throw InvalidArgument("unknown feature set '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (layer_sizes.empty()) throw InvalidArgument("at least one hidden layer is required");
  for (const auto w : layer_sizes)
    if (w == 0) throw InvalidArgument("hidden layer widths must be positive");
  if (embedding_dim == 0) throw InvalidArgument("embedding_dim must be positive");
  if (batch_size == 0) throw InvalidArgument("batch_size must be positive");
  if (!(learning_rate >= 0) || !std::isfinite(learning_rate))
    throw InvalidArgument("learning_rate must be a non-negative finite number");
  if (!(dropout_rate >= 0 && dropout_rate < 1)) throw InvalidArgument("dropout must be in [0, 1)");
  if (list_size == 0) throw InvalidArgument("list_size must be positive");
  if (checkpoint_every == 0) throw InvalidArgument("checkpoint_every must be positive");
  if (!(ndcg_temperature > 0)) throw InvalidArgument("ndcg_temperature must be positive");
  if (!(adagrad_initial_accumulator >= 0)) throw InvalidArgument("accumulator must be >= 0");
  if (!(adagrad_epsilon > 0)) throw InvalidArgument("adagrad epsilon must be positive");
  if (limits.query_tokens == 0 || limits.answer_tokens == 0)
    throw InvalidArgument("token limits must be positive");
}

TrainConfig preset(std::string_view name) {
  TrainConfig c;
  if (name == "exp1") return c;
  if (name == "exp2" || name == "exp3") {
    c.learning_rate = 0.05;
    c.dropout_rate = 0.4;
    c.list_size = 20;
    c.layer_sizes = {64, 32, 16, 128};
    if (name == "exp3") c.features = FeatureSet::EmbeddingDense;
    return c;
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "' (expected exp1, exp2, exp3)");
}

std::size_t ExampleList::real_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      candidates.begin(), candidates.end(), [](const auto& c) { return !c.is_pad(); }));
}

std::vector<int> ExampleList::labels() const {
  std::vector<int> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(c.label);
  return out;
}

ExampleList fit_list(ExampleList list, std::size_t list_size, const FeatureLimits& limits) {
  if (list_size == 0) throw InvalidArgument("list_size must be positive");
  std::vector<CandidateFeatures> real;
  for (auto& c : list.candidates)
    if (!c.is_pad() && real.size() < list_size) real.push_back(std::move(c));
  if (real.empty())
    throw InvalidArgument("list for query " + std::to_string(list.query_id) +
                          " has no real candidate");
  while (real.size() < list_size) real.push_back(CandidateFeatures::pad(limits));
  list.candidates = std::move(real);
  return list;
}

double transform_dense(std::size_t field, double raw) {
  return dense_fields().at(field).is_count ? std::log1p(std::max(raw, 0.0)) : raw;
}

Normalization fit_normalization(std::span<const ExampleList> lists) {
  Normalization n;
  n.mean.assign(kDenseDim, 0.0);
  n.stddev.assign(kDenseDim, 1.0);
  std::vector<double> sum(kDenseDim, 0.0), sq(kDenseDim, 0.0);
  std::size_t count = 0;
  for (const auto& l : lists)
    for (const auto& c : l.candidates) {
      if (c.is_pad()) continue;
      for (std::size_t f = 0; f < kDenseDim; ++f) sum[f] += transform_dense(f, c.dense.at(f));
      ++count;
    }
  if (count == 0) return n;
  for (std::size_t f = 0; f < kDenseDim; ++f) n.mean[f] = sum[f] / static_cast<double>(count);
  for (const auto& l : lists)
    for (const auto& c : l.candidates) {
      if (c.is_pad()) continue;
      for (std::size_t f = 0; f < kDenseDim; ++f) {
        const double d = transform_dense(f, c.dense[f]) - n.mean[f];
        sq[f] += d * d;
      }
    }
  for (std::size_t f = 0; f < kDenseDim; ++f) {
    const double sd = std::sqrt(sq[f] / static_cast<double>(count));
    n.stddev[f] = sd < 1e-12 ? 0.0 : sd;
  }
  return n;
}

std::size_t ModelParams::input_dim() const noexcept {
  return 2 * embedding_dim + (use_dense ? kDenseDim : 0);
}

std::size_t ModelParams::parameter_count() const noexcept {
  std::size_t n = embedding.size();
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

ModelParams init_params(const TrainConfig& config, std::size_t vocab_size,
                        std::uint64_t vocab_hash, Normalization norm) {
  config.validate();
  ModelParams p;
  p.vocab_size = vocab_size;
  p.embedding_dim = config.embedding_dim;
  p.use_dense = config.features == FeatureSet::EmbeddingDense;
  p.vocab_hash = vocab_hash;
  p.norm = std::move(norm);
  if (p.norm.mean.size() != kDenseDim || p.norm.stddev.size() != kDenseDim)
    throw InvalidArgument("normalization statistics have the wrong dimension");

  std::mt19937_64 rng(config.seed);
  p.embedding.resize((vocab_size + 1) * p.embedding_dim);
  for (auto& w : p.embedding) w = uniform(rng, -0.05, 0.05);

  std::size_t in = p.input_dim();
  auto widths = config.layer_sizes;
  widths.push_back(1);
  for (const auto out : widths) {
    DenseLayer layer(in, out);
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (auto& w : layer.weight) w = uniform(rng, -limit, limit);
    p.layers.push_back(std::move(layer));
    in = out;
  }
  return p;
}

AdagradState init_adagrad(const ModelParams& params, double initial_accumulator) {
  AdagradState s;
  s.embedding.assign(params.embedding.size(), initial_accumulator);
  for (const auto& l : params.layers) {
    DenseLayer acc(l.in, l.out);
    std::fill(acc.weight.begin(), acc.weight.end(), initial_accumulator);
    std::fill(acc.bias.begin(), acc.bias.end(), initial_accumulator);
    s.layers.push_back(std::move(acc));
  }
  return s;
}

double dropout_scale(const DropoutKey& key, std::size_t layer, std::size_t unit) noexcept {
  if (key.rate <= 0) return 1.0;
  std::uint64_t h = mix(key.seed);
  h = mix(h ^ key.step);
  h = mix(h ^ key.list);
  h = mix(h ^ key.candidate);
  h = mix(h ^ layer);
  h = mix(h ^ unit);
  return bugrank::unit(h) < key.rate ? 0.0 : 1.0 / (1.0 - key.rate);
}

double forward(const ModelParams& params, const CandidateFeatures& c, const DropoutKey* dropout,
               ForwardCache& cache) {
  if (params.layers.empty()) throw InvalidArgument("model has no layers");
  const std::size_t e = params.embedding_dim;
  cache.input.assign(params.input_dim(), 0.0);
  cache.query_tokens = pool(params, c.query_token_ids, cache.input.data());
  cache.answer_tokens = pool(params, c.answer_token_ids, cache.input.data() + e);
  if (params.use_dense) {
    if (c.dense.size() != kDenseDim)
      throw InvalidArgument("dense feature vector has " + std::to_string(c.dense.size()) +
                            " entries, expected " + std::to_string(kDenseDim));
    for (std::size_t f = 0; f < kDenseDim; ++f)
      if (params.norm.stddev[f] > 0)
        cache.input[2 * e + f] =
            (transform_dense(f, c.dense[f]) - params.norm.mean[f]) / params.norm.stddev[f];
  }
  if (params.layers.front().in != cache.input.size())
    throw InvalidArgument("input dimension does not match the first layer");

  const std::size_t hidden = params.hidden_count();
  cache.pre.resize(hidden);
  cache.post.resize(hidden);
  cache.scale.resize(hidden);
  const std::vector<double>* x = &cache.input;
  for (std::size_t l = 0; l < hidden; ++l) {
    const auto& layer = params.layers[l];
    auto& pre = cache.pre[l];
    auto& post = cache.post[l];
    auto& scale = cache.scale[l];
    pre.assign(layer.out, 0.0);
    post.assign(layer.out, 0.0);
    scale.assign(layer.out, 1.0);
    for (std::size_t u = 0; u < layer.out; ++u) {
      const double* w = layer.weight.data() + u * layer.in;
      double s = layer.bias[u];
      for (std::size_t j = 0; j < layer.in; ++j) s += w[j] * (*x)[j];
      pre[u] = s;
      if (dropout) scale[u] = dropout_scale(*dropout, l, u);
      post[u] = (s > 0 ? s : 0.0) * scale[u];
    }
    check_finite(pre, l);
    x = &post;
  }
  const auto& out = params.layers.back();
  if (out.out != 1 || out.in != x->size()) throw InvalidArgument("malformed output layer");
  double s = out.bias[0];
  for (std::size_t j = 0; j < out.in; ++j) s += out.weight[j] * (*x)[j];
  if (!std::isfinite(s)) throw NumericError("non-finite activation in output layer");
  cache.output = s;
  return s;
}

double score(const ModelParams& params, const CandidateFeatures& c, const DropoutKey* dropout) {
  ForwardCache cache;
  return forward(params, c, dropout, cache);
}

std::span<double> SparseRows::row(std::int32_t id) {
  auto [it, inserted] = slot_.try_emplace(id, ids_.size());
  if (inserted) {
    ids_.push_back(id);
    data_.resize(data_.size() + dim_, 0.0);
  }
  return {data_.data() + it->second * dim_, dim_};
}

const double* SparseRows::find(std::int32_t id) const {
  const auto it = slot_.find(id);
  return it == slot_.end() ? nullptr : data_.data() + it->second * dim_;
}

void SparseRows::add(const SparseRows& other) {
  other.for_each([&](std::int32_t id, std::span<const double> src) {
    auto dst = row(id);
    for (std::size_t e = 0; e < dim_; ++e) dst[e] += src[e];
  });
}

void SparseRows::scale(double s) {
  for (auto& x : data_) x *= s;
}

Gradients Gradients::zeros_like(const ModelParams& params) {
  Gradients g;
  g.embedding = SparseRows(params.embedding_dim);
  for (const auto& l : params.layers) g.layers.emplace_back(l.in, l.out);
  return g;
}

void Gradients::add(const Gradients& other) {
  embedding.add(other.embedding);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& dst = layers[l];
    const auto& src = other.layers.at(l);
    for (std::size_t i = 0; i < dst.weight.size(); ++i) dst.weight[i] += src.weight[i];
    for (std::size_t i = 0; i < dst.bias.size(); ++i) dst.bias[i] += src.bias[i];
  }
  loss += other.loss;
}

void Gradients::scale(double s) {
  embedding.scale(s);
  for (auto& l : layers) {
    for (auto& w : l.weight) w *= s;
    for (auto& b : l.bias) b *= s;
  }
  loss *= s;
}

void backward(const ModelParams& params, const CandidateFeatures& c, const ForwardCache& cache,
              double upstream, Gradients& grad) {
  const std::size_t hidden = params.hidden_count();
  // delta w.r.t. the input of the current layer, walking backwards
  const auto& out = params.layers.back();
  const std::vector<double>& last = hidden ? cache.post[hidden - 1] : cache.input;
  auto& gout = grad.layers.back();
  gout.bias[0] += upstream;
  std::vector<double> delta(out.in);
  for (std::size_t j = 0; j < out.in; ++j) {
    gout.weight[j] += upstream * last[j];
    delta[j] = upstream * out.weight[j];
  }

  for (std::size_t l = hidden; l-- > 0;) {
    const auto& layer = params.layers[l];
    auto& g = grad.layers[l];
    const std::vector<double>& x = l ? cache.post[l - 1] : cache.input;
    std::vector<double> below(layer.in, 0.0);
    for (std::size_t u = 0; u < layer.out; ++u) {
      const double d = cache.pre[l][u] > 0 ? delta[u] * cache.scale[l][u] : 0.0;
      if (d == 0) continue;
      g.bias[u] += d;
      double* gw = g.weight.data() + u * layer.in;
      const double* w = layer.weight.data() + u * layer.in;
      for (std::size_t j = 0; j < layer.in; ++j) {
        gw[j] += d * x[j];
        below[j] += d * w[j];
      }
    }
    delta = std::move(below);
  }

  const std::size_t e = params.embedding_dim;
  const auto spread = [&](const std::vector<std::int32_t>& ids, std::size_t count,
                          std::size_t offset) {
    if (count == 0) return;
    const double inv = 1.0 / static_cast<double>(count);
    for (const auto id : ids) {
      if (id == kPadToken) continue;
      auto row = grad.embedding.row(id);
      for (std::size_t k = 0; k < e; ++k) row[k] += delta[offset + k] * inv;
    }
  };
  spread(c.query_token_ids, cache.query_tokens, 0);
  spread(c.answer_token_ids, cache.answer_tokens, e);
}

double list_loss_and_gradients(const ModelParams& params, const ExampleList& list,
                               const TrainConfig& config, std::uint64_t step,
                               std::uint64_t list_slot, Gradients* grad) {
  std::vector<std::size_t> real;
  for (std::size_t i = 0; i < list.candidates.size(); ++i)
    if (!list.candidates[i].is_pad()) real.push_back(i);
  std::vector<double> scores(real.size());
  std::vector<int> labels(real.size());
  std::vector<ForwardCache> caches(real.size());
  for (std::size_t r = 0; r < real.size(); ++r) {
    const auto& c = list.candidates[real[r]];
    const DropoutKey key{config.dropout_rate, config.seed, step, list_slot, real[r]};
    scores[r] = forward(params, c, &key, caches[r]);
    labels[r] = c.label;
  }
  std::vector<double> dscore(real.size());
  const double loss = approx_ndcg_loss_grad(scores, labels, config.ndcg_temperature, dscore);
  if (!std::isfinite(loss)) throw NumericError("non-finite loss for query " +
                                               std::to_string(list.query_id));
  if (grad)
    for (std::size_t r = 0; r < real.size(); ++r)
      if (dscore[r] != 0) backward(params, list.candidates[real[r]], caches[r], dscore[r], *grad);
  return loss;
}

void adagrad_update(ModelParams& params, AdagradState& state, const Gradients& grad,
                    double learning_rate, double epsilon) {
  const auto apply = [&](double& p, double& acc, double g) {
    acc += g * g;
    p -= learning_rate * g / (std::sqrt(acc) + epsilon);
  };
  const std::size_t e = params.embedding_dim;
  grad.embedding.for_each([&](std::int32_t id, std::span<const double> g) {
    const std::size_t base = static_cast<std::size_t>(id) * e;
    for (std::size_t k = 0; k < e; ++k)
      apply(params.embedding[base + k], state.embedding[base + k], g[k]);
  });
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    auto& p = params.layers[l];
    auto& s = state.layers[l];
    const auto& g = grad.layers[l];
    for (std::size_t i = 0; i < p.weight.size(); ++i) apply(p.weight[i], s.weight[i], g.weight[i]);
    for (std::size_t i = 0; i < p.bias.size(); ++i) apply(p.bias[i], s.bias[i], g.bias[i]);
  }
}

}  // namespace bugrank
