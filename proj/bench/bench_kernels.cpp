#include <benchmark/benchmark.h>

#include <random>

#include "bugrank/kernels.hpp"

using namespace bugrank;

namespace {

std::vector<ExampleList> make_lists(std::size_t n, std::size_t list_size) {
  std::mt19937 rng(99);
  std::vector<ExampleList> out;
  for (std::size_t q = 0; q < n; ++q) {
    ExampleList l;
    l.query_id = static_cast<PostId>(q + 1);
    const std::size_t real = 1 + rng() % list_size;
    for (std::size_t i = 0; i < real; ++i) {
      CandidateFeatures c;
      c.answer_id = static_cast<PostId>(q * 1000 + i + 1);
      for (int t = 0; t < 40; ++t) c.query_token_ids.push_back(static_cast<std::int32_t>(rng() % 2000));
      for (int t = 0; t < 120; ++t) c.answer_token_ids.push_back(static_cast<std::int32_t>(rng() % 2000));
      c.dense.resize(kDenseDim);
      for (auto& d : c.dense) d = static_cast<double>(rng() % 100);
      c.label = 1 + static_cast<int>(rng() % 5);
      l.candidates.push_back(std::move(c));
    }
    out.push_back(fit_list(std::move(l), list_size, FeatureLimits{}));
  }
  return out;
}

struct Setup {
  TrainConfig config;
  std::vector<ExampleList> lists;
  ModelParams params;
  std::vector<const ExampleList*> batch;

  Setup() {
    config = preset("exp3");
    config.list_size = 50;
    lists = make_lists(256, config.list_size);
    params = init_params(config, 2000, 0, fit_normalization(lists));
    for (std::size_t i = 0; i < config.batch_size; ++i) batch.push_back(&lists[i]);
  }
};

const Setup& setup() {
  static const Setup s;
  return s;
}

struct IndexSetup {
  QuestionIndex index;
  TfIdfVector query;
  std::vector<std::size_t> slots;

  IndexSetup() {
    std::mt19937 rng(5);
    std::vector<std::pair<PostId, TokenList>> docs;
    for (std::size_t d = 0; d < 20000; ++d) {
      TokenList t;
      t.stage = TokenStage::Stemmed;
      for (int w = 0; w < 60; ++w) t.tokens.push_back("w" + std::to_string(rng() % 5000));
      docs.emplace_back(static_cast<PostId>(d + 1), std::move(t));
    }
    index = QuestionIndex::build(docs);
    query = index.vector_at(17);
    for (std::size_t i = 0; i < index.size(); ++i) slots.push_back(i);
  }
};

const IndexSetup& index_setup() {
  static const IndexSetup s;
  return s;
}

void BM_batch_gradients_serial(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::serial::batch_gradients(s.params, s.batch, s.config, 1));
}
void BM_batch_gradients_omp(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::omp::batch_gradients(s.params, s.batch, s.config, 1));
}
void BM_list_metrics_serial(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::list_metrics(s.params, s.lists));
}
void BM_list_metrics_omp(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::list_metrics(s.params, s.lists));
}
void BM_similarities_serial(benchmark::State& state) {
  const auto& s = index_setup();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::serial::similarities(s.index, s.query, s.slots));
}
void BM_similarities_omp(benchmark::State& state) {
  const auto& s = index_setup();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::similarities(s.index, s.query, s.slots));
}

}  // namespace

BENCHMARK(BM_batch_gradients_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_batch_gradients_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_list_metrics_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_list_metrics_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_similarities_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_similarities_omp)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
