// Acceptance suite: one PASS/FAIL line per criterion.

#include <malloc.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <streambuf>

#include "bugrank/approx_ndcg.hpp"
#include "bugrank/cli.hpp"
#include "bugrank/dataset.hpp"
#include "bugrank/dump_parser.hpp"
#include "bugrank/error.hpp"
#include "bugrank/features.hpp"
#include "bugrank/metrics.hpp"
#include "bugrank/pipeline.hpp"
#include "bugrank/text.hpp"
#include "bugrank/train.hpp"
#include "dom_reference.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bugrank;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// -- metrics ---------------------------------------------------------------

Verdict metric_oracle() {
  const auto start = Clock::now();
  std::mt19937 rng(1001);
  double worst = 0;
  std::vector<std::vector<int>> lists;
  for (int round = 0; round < 1000; ++round) {
    std::vector<int> l(1 + rng() % 8);
    for (auto& g : l) g = static_cast<int>(rng() % 6);
    if (rng() % 4 == 0) std::fill(l.end() - static_cast<long>(rng() % l.size()), l.end(), -1);
    lists.push_back(l);
    const auto arp = average_relevance_position(l);
    const auto arp_ref = oracle::arp(l);
    if (arp.has_value() != arp_ref.has_value()) return {false, "ARP definedness differs"};
    if (arp) worst = std::max(worst, std::abs(*arp - *arp_ref));
    worst = std::max(worst, std::abs(average_precision(l) - oracle::average_precision(l)));
    const auto ideal = oracle::idcg_all_cutoffs(l, 10);
    for (std::size_t k = 1; k <= 10; ++k) {
      const double ndcg_ref = ideal[k] == 0 ? 0.0 : oracle::dcg(l, k) / ideal[k];
      worst = std::max(worst, std::abs(dcg_at_k(l, k) - oracle::dcg(l, k)));
      worst = std::max(worst, std::abs(ndcg_at_k(l, k) - ndcg_ref));
      worst = std::max(worst, std::abs(precision_at_k(l, k) - oracle::precision(l, k)));
      worst = std::max(worst, std::abs(recall_at_k(l, k, relevant_count(l)) - oracle::recall(l, k)));
    }
  }
  double map_ref = 0, mrr_ref = 0;
  for (const auto& l : lists) {
    map_ref += oracle::average_precision(l);
    mrr_ref += oracle::reciprocal_rank(l);
  }
  std::vector<QueryMetrics> per;
  for (const auto& l : lists) per.push_back(query_metrics(l));
  const auto report = reduce_metrics(per);
  worst = std::max(worst, std::abs(report.map - map_ref / 1000));
  worst = std::max(worst, std::abs(mrr(lists) - mrr_ref / 1000));
  const double t = seconds_since(start);
  return {worst <= 1e-12 && t < 10, fmt("max |delta| %.3g over 1000 lists, %.2f s", worst, t)};
}

Verdict grading_buckets() {
  const std::vector<std::int64_t> scores{1,  2,  2,  2,  11, 16,  17,  22,  24,  30,
                                         32, 36, 45, 69, 79, 125, 361, 943, 1860};
  const std::vector<std::vector<std::int64_t>> expected{
      {1, 2, 2, 2}, {11, 16, 17, 22}, {24, 30, 32, 36}, {45, 69, 79, 125}, {361, 943, 1860}};
  auto shuffled = scores;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(7));
  const auto grades = grade_answers(shuffled);
  std::vector<std::vector<std::int64_t>> buckets(5);
  int grade30 = 0;
  for (std::size_t i = 0; i < shuffled.size(); ++i) {
    buckets[static_cast<std::size_t>(grades[i] - 1)].push_back(shuffled[i]);
    if (shuffled[i] == 30) grade30 = grades[i];
  }
  for (auto& b : buckets) std::sort(b.begin(), b.end());
  return {buckets == expected && grade30 == 3,
          fmt("bucket sizes 4/4/4/4/3, score 30 -> grade %.0f", grade30)};
}

Verdict kappa() {
  std::mt19937 rng(1012);
  int mismatches = 0;
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng() % 40;
    const int labels = 2 + static_cast<int>(rng() % 4);
    std::vector<int> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<int>(rng() % labels);
      b[i] = rng() % 2 ? a[i] : static_cast<int>(rng() % labels);
    }
    mismatches += cohen_kappa(a, b) != oracle::kappa(a, b);
  }
  const std::vector<std::string> x{"R", "NR", "R", "NR", "R", "R", "NR", "NR"};
  const std::vector<std::string> chance{"R", "R", "NR", "NR", "R", "NR", "R", "NR"};
  const double perfect = cohen_kappa(x, x);
  const double zero = cohen_kappa(x, chance);
  return {mismatches == 0 && perfect == 1.0 && zero == 0.0,
          fmt("%.0f/100 exact matches, perfect %.1f, chance %.1f", 100 - mismatches, perfect, zero)};
}

Verdict padding_precision() {
  std::mt19937 rng(1007);
  std::vector<ExampleList> lists;
  for (int q = 0; q < 300; ++q) {
    ExampleList l;
    l.query_id = q + 1;
    const std::size_t n = 1 + rng() % 25;
    std::vector<std::int64_t> votes;
    for (std::size_t i = 0; i < n; ++i) votes.push_back(static_cast<std::int64_t>(rng() % 50));
    const auto grades = grade_answers(votes);
    for (std::size_t i = 0; i < n; ++i) {
      CandidateFeatures c;
      c.answer_id = static_cast<PostId>(q * 100 + static_cast<int>(i) + 1);
      c.label = grades[i];
      c.dense.assign(kDenseDim, 0.0);
      l.candidates.push_back(c);
    }
    lists.push_back(fit_list(std::move(l), 20, FeatureLimits{}));
  }
  std::vector<std::vector<double>> scores;
  for (const auto& l : lists) {
    std::vector<double> s;
    for (std::size_t i = 0; i < l.real_count(); ++i) s.push_back(static_cast<double>(rng() % 1000));
    scores.push_back(s);
  }
  const auto report = evaluate_scores(lists, scores);
  bool exact = true;
  for (std::size_t k = 1; k <= kMetricDepth; ++k) {
    double sum = 0;
    for (const auto& l : lists)
      sum += static_cast<double>(std::min(l.real_count(), k)) / static_cast<double>(k);
    exact = exact && report.precision[k - 1] == sum / static_cast<double>(lists.size());
  }
  return {exact, fmt("P@1 %.4f, P@10 %.4f over 300 padded lists", report.precision[0],
                     report.precision[9])};
}

// -- ltr -------------------------------------------------------------------

Verdict gradient_check() {
  const auto start = Clock::now();
  std::mt19937 rng(1003);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  int checked = 0, saturated = 0;
  for (int model = 0; checked < 100; ++model) {
    TrainConfig cfg;
    cfg.embedding_dim = 2 + rng() % 3;
    cfg.layer_sizes.clear();
    for (std::size_t l = 0, n = 1 + rng() % 3; l < n; ++l) cfg.layer_sizes.push_back(2 + rng() % 5);
    cfg.features = rng() % 2 ? FeatureSet::EmbeddingDense : FeatureSet::Embedding;
    cfg.ndcg_temperature = 0.3 + 0.7 * (rng() % 100) / 100.0;
    cfg.seed = static_cast<std::uint64_t>(model);
    const std::size_t vocab = 12;

    ExampleList list;
    const std::size_t n = 2 + rng() % 5;
    std::vector<std::int32_t> query;
    for (int t = 0; t < 3; ++t) query.push_back(static_cast<std::int32_t>(rng() % (vocab + 1)));
    for (std::size_t i = 0; i < n; ++i) {
      CandidateFeatures c;
      c.answer_id = static_cast<PostId>(i + 1);
      c.query_token_ids = query;
      for (int t = 0; t < 4; ++t) c.answer_token_ids.push_back(static_cast<std::int32_t>(rng() % (vocab + 1)));
      c.dense.resize(kDenseDim);
      for (auto& d : c.dense) d = 3 * (u(rng) + 1);
      c.label = i == 0 ? 1 + static_cast<int>(rng() % 4) : static_cast<int>(rng() % 5);
      list.candidates.push_back(std::move(c));
    }
    const std::vector<ExampleList> one{list};
    auto p = init_params(cfg, vocab, 0, fit_normalization(one));
    for (auto& layer : p.layers)
      for (auto& b : layer.bias) b = 0.2 * u(rng);
    auto g = Gradients::zeros_like(p);
    list_loss_and_gradients(p, list, cfg, 1, 0, &g);

    std::vector<double> analytic, numeric;
    // fourth-order central difference
    const auto probe = [&](double& slot, double a) {
      const double keep = slot;
      const double h = 3e-6;
      const auto at = [&](double x) {
        slot = keep + x;
        return list_loss_and_gradients(p, list, cfg, 1, 0, nullptr);
      };
      const double d = (8 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h);
      slot = keep;
      analytic.push_back(a);
      numeric.push_back(d);
    };
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
      for (std::size_t i = 0; i < p.layers[l].weight.size(); ++i)
        probe(p.layers[l].weight[i], g.layers[l].weight[i]);
      for (std::size_t i = 0; i < p.layers[l].bias.size(); ++i)
        probe(p.layers[l].bias[i], g.layers[l].bias[i]);
    }
    for (std::size_t row = 0; row <= vocab; ++row) {
      const double* gr = g.embedding.find(static_cast<std::int32_t>(row));
      for (std::size_t k = 0; k < p.embedding_dim; ++k)
        probe(p.embedding[row * p.embedding_dim + k], gr ? gr[k] : 0.0);
    }
    double diff = 0, na = 0, nn = 0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
      na += analytic[i] * analytic[i];
      nn += numeric[i] * numeric[i];
    }
    const double scale = std::sqrt(std::max(na, nn));
    // flat gradient, redraw
    if (scale < 1e-5) {
      ++saturated;
      continue;
    }
    ++checked;
    worst = std::max(worst, std::sqrt(diff) / scale);
  }
  const double t = seconds_since(start);
  return {worst < 1e-4 && t < 60,
          fmt("max relative error %.2e over 100 models (%.0f saturated redrawn), %.2f s", worst,
              saturated, t)};
}

Verdict surrogate_limit() {
  std::mt19937 rng(1004);
  double worst = 0;
  for (int round = 0; round < 1000; ++round) {
    const std::size_t n = 2 + rng() % 19;
    std::vector<int> grid(1000);
    std::iota(grid.begin(), grid.end(), -500);
    std::shuffle(grid.begin(), grid.end(), rng);
    std::vector<double> s(n);
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = grid[i] * 0.01;
      l[i] = static_cast<int>(rng() % 5);
    }
    const double exact = ndcg_at_k(rank_by_scores(s, l), n);
    worst = std::max(worst, std::abs(-approx_ndcg_loss(s, l, 1e-4) - exact));
  }
  return {worst <= 1e-3, fmt("max |(-loss) - NDCG| %.2e at temperature 1e-4", worst)};
}

// Labels are a monotone function of two dense fields plus noise; tokens carry
// no signal.
std::vector<ExampleList> trainability_lists(std::size_t n, std::uint32_t seed) {
  std::vector<std::size_t> fields;
  for (std::size_t f = 0; f < kDenseDim && fields.size() < 2; ++f)
    if (!dense_fields()[f].is_count) fields.push_back(f);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> noise(0, 0.03);
  std::vector<ExampleList> out;
  for (std::size_t q = 0; q < n; ++q) {
    ExampleList l;
    l.query_id = static_cast<PostId>(q + 1);
    const std::size_t count = 5 + rng() % 16;
    for (std::size_t i = 0; i < count; ++i) {
      CandidateFeatures c;
      c.answer_id = static_cast<PostId>(q * 100 + i + 1);
      for (int t = 0; t < 5; ++t) c.query_token_ids.push_back(static_cast<std::int32_t>(rng() % 100));
      for (int t = 0; t < 8; ++t) c.answer_token_ids.push_back(static_cast<std::int32_t>(rng() % 100));
      c.dense.assign(kDenseDim, 0.0);
      const double a = u(rng), b = u(rng);
      c.dense[fields[0]] = a;
      c.dense[fields[1]] = b;
      const double y = 0.6 * a + 0.4 * b + noise(rng);
      c.label = std::clamp(static_cast<int>(std::floor(5 * y)), 0, 4);
      l.candidates.push_back(std::move(c));
    }
    out.push_back(std::move(l));
  }
  return out;
}

Verdict trainability() {
  const auto start = Clock::now();
  auto cfg = preset("exp1");
  cfg.features = FeatureSet::EmbeddingDense;
  const auto train_lists = trainability_lists(200, 1005);
  const auto eval_lists = trainability_lists(100, 2005);
  const auto fit = [&](const std::vector<ExampleList>& in) {
    std::vector<ExampleList> out;
    for (const auto& l : in) out.push_back(fit_list(l, cfg.list_size, cfg.limits));
    return out;
  };
  const auto tr = fit(train_lists);
  const auto ev = fit(eval_lists);
  const auto result = train({tr, ev, 100, 0}, cfg);
  const auto& cps = result.history.checkpoints;

  double best_early = 0;
  for (const auto& c : cps)
    if (c.step <= 2000) best_early = std::max(best_early, c.eval.ndcg[9]);
  std::vector<double> smooth;
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i)
    smooth.push_back((cps[i].train_loss + cps[i + 1].train_loss + cps[i + 2].train_loss) / 3);
  bool monotone = true;
  for (std::size_t i = 1; i < smooth.size(); ++i) monotone = monotone && smooth[i] <= smooth[i - 1];
  const double t = seconds_since(start);
  return {best_early >= 0.95 && monotone && t < 300,
          fmt("NDCG@10 %.4f by step 2000, %.1f s", best_early, t) +
              (monotone ? ", smoothed loss non-increasing" : ", smoothed loss increased")};
}

// -- pipeline ----------------------------------------------------------------

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << e.str();
  return code;
}

struct Built {
  std::filesystem::path store, index, dataset;
};

Built build_fixture_artifacts(const std::filesystem::path& dir) {
  const auto dump = testing::fixture("mini_dump");
  Built b{dir / "store", dir / "index.bin", dir / "dataset"};
  if (cli({"ingest", "--posts", (dump / "Posts.xml").string(), "--users",
           (dump / "Users.xml").string(), "--comments", (dump / "Comments.xml").string(),
           "--store", b.store.string()}) != 0 ||
      cli({"index", "--store", b.store.string(), "--out", b.index.string()}) != 0 ||
      cli({"dataset", "--store", b.store.string(), "--index", b.index.string(), "--out",
           b.dataset.string()}) != 0)
    throw std::runtime_error("building fixture artifacts failed");
  return b;
}

Verdict trend() {
  const auto start = Clock::now();
  testing::TempDir tmp;
  const auto built = build_fixture_artifacts(tmp.path());
  const auto ds = load_dataset(built.dataset);
  double ndcg[3] = {0, 0, 0};
  const char* names[3] = {"exp1", "exp2", "exp3"};
  for (int i = 0; i < 3; ++i) {
    const auto cfg = preset(names[i]);
    const auto r = train({ds.train, ds.test, ds.manifest.vocabulary_size,
                          ds.manifest.vocabulary_hash},
                         cfg);
    ndcg[i] = r.history.checkpoints.back().eval.ndcg[9];
  }
  const double t = seconds_since(start);
  const bool ok = ndcg[2] >= ndcg[1] - 0.01 && ndcg[1] >= ndcg[0] - 0.01 && t < 900;
  return {ok, fmt("NDCG@10 exp1 %.4f, exp2 %.4f, exp3 %.4f", ndcg[0], ndcg[1], ndcg[2]) +
                  fmt(", %.0f s", t)};
}

Verdict split_hygiene() {
  testing::TempDir tmp;
  const auto built = build_fixture_artifacts(tmp.path());
  StoreReader store(built.store);
  const auto index = QuestionIndex::load(built.index);
  std::size_t leaks = 0;
  double lo = 1, hi = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    DatasetConfig cfg;
    cfg.seed = seed;
    const auto ds = assemble_training_set(store, index, cfg);
    std::set<std::int64_t> train(ds.train_groups.begin(), ds.train_groups.end());
    for (const auto g : ds.test_groups) leaks += train.count(g);
    const double frac = static_cast<double>(ds.test.size()) /
                        static_cast<double>(ds.test.size() + ds.train.size());
    lo = std::min(lo, frac);
    hi = std::max(hi, frac);
  }
  return {leaks == 0 && lo >= 0.15 && hi <= 0.25,
          fmt("%.0f leaked groups over 100 seeds, test fraction in [%.3f, %.3f]",
              static_cast<double>(leaks), lo, hi)};
}

Verdict porter() {
  std::istringstream sub(testing::read_file(testing::data_file("porter/subset100.tsv")));
  std::size_t n = 0, ok = 0;
  for (std::string line; std::getline(sub, line);) {
    const auto tab = line.find('\t');
    ++n;
    ok += porter_stem(line.substr(0, tab)) == line.substr(tab + 1);
  }
  std::istringstream voc(testing::read_file(testing::data_file("porter/voc.txt")));
  std::istringstream out(testing::read_file(testing::data_file("porter/output.txt")));
  std::size_t total = 0, agree = 0;
  for (std::string w, s; std::getline(voc, w) && std::getline(out, s);) {
    ++total;
    agree += porter_stem(w) == s;
  }
  const double rate = total ? static_cast<double>(agree) / static_cast<double>(total) : 0;
  return {n == 100 && ok == n && rate >= 0.999,
          fmt("subset %.0f/100, full vocabulary %.4f%% of %.0f words", static_cast<double>(ok),
              100 * rate, static_cast<double>(total))};
}

// Synthesizes a Posts.xml document row by row without holding it in memory.
class GeneratedDump : public std::streambuf {
 public:
  explicit GeneratedDump(std::size_t rows) : rows_(rows) { refill(); }

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    if (!refill()) return traits_type::eof();
    return traits_type::to_int_type(*gptr());
  }

 private:
  bool refill() {
    buf_.clear();
    if (stage_ == 0) {
      buf_ = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<posts>\n";
      stage_ = 1;
    } else if (stage_ == 1 && next_ < rows_) {
      for (int i = 0; i < 64 && next_ < rows_; ++i, ++next_) {
        const auto id = std::to_string(next_ + 1);
        if (next_ % 4 == 0)
          buf_ += "  <row Id=\"" + id + "\" PostTypeId=\"1\" CreationDate=\"2018-03-04T05:06:07.890\" Score=\"" +
                  std::to_string(next_ % 37) + "\" Body=\"&lt;p&gt;How do I fix error " + id +
                  " when the loop runs past the end of the array?&lt;/p&gt;&lt;pre&gt;&lt;code&gt;for i in range(n):\n  x[i+1]&lt;/code&gt;&lt;/pre&gt;\" OwnerUserId=\"" +
                  std::to_string(next_ % 97) + "\" Title=\"Index error number " + id +
                  "\" Tags=\"&lt;python&gt;\" AnswerCount=\"3\" CommentCount=\"1\" />\n";
        else
          buf_ += "  <row Id=\"" + id + "\" PostTypeId=\"2\" ParentId=\"" +
                  std::to_string(next_ - next_ % 4 + 1) +
                  "\" CreationDate=\"2018-03-05T05:06:07.890\" Score=\"" + std::to_string(next_ % 11) +
                  "\" Body=\"&lt;p&gt;Use range(n - 1) instead; see https://docs.python.org for details.&lt;/p&gt;\" OwnerUserId=\"" +
                  std::to_string(next_ % 89) + "\" CommentCount=\"0\" />\n";
      }
    } else if (stage_ == 1) {
      buf_ = "</posts>\n";
      stage_ = 2;
    } else {
      return false;
    }
    setg(buf_.data(), buf_.data(), buf_.data() + buf_.size());
    return true;
  }

  std::size_t rows_;
  std::size_t next_ = 0;
  int stage_ = 0;
  std::string buf_;
};

std::size_t peak_heap_while_parsing(std::size_t rows, std::size_t* emitted) {
  GeneratedDump gen(rows);
  std::istream in(&gen);
  malloc_trim(0);
  const std::size_t base = mallinfo2().uordblks;
  std::size_t peak = 0;
  std::size_t seen = 0;
  const auto stats = parse_rows(RowKind::Posts, in, [&](Record&& r) {
    ++seen;
    if (std::get<RawPost>(r).id == 0) std::abort();
    const std::size_t now = mallinfo2().uordblks;
    peak = std::max(peak, now > base ? now - base : 0);
  });
  *emitted = stats.emitted;
  return peak;
}

Verdict ingestion() {
  const auto path = testing::fixture("posts_1000.xml");
  std::ifstream in(path, std::ios::binary);
  const auto parsed = parse_posts(in);
  const auto reference = oracle::reference_posts(path.string());
  const bool equal = parsed.size() == 1000 && parsed == reference;

  std::size_t small_rows = 0, large_rows = 0;
  const auto small = peak_heap_while_parsing(1000, &small_rows);
  const auto large = peak_heap_while_parsing(10000, &large_rows);
  const bool bounded = small_rows == 1000 && large_rows == 10000 &&
                       large <= small + small / 10 + 64 * 1024;
  return {equal && bounded,
          fmt("%.0f rows field-equal; peak heap %.0f KiB at 1000 rows, ", static_cast<double>(parsed.size()),
              small / 1024.0) +
              fmt("%.0f KiB at 10000 rows", large / 1024.0)};
}

Verdict determinism() {
  const std::vector<std::string> queries{"segmentation fault after free", "list index out of range",
                                         "undefined is not a function"};
  std::vector<std::vector<std::string>> runs;
  for (int run = 0; run < 2; ++run) {
    testing::TempDir tmp;
    const auto b = build_fixture_artifacts(tmp.path());
    const auto model = tmp.path() / "model";
    if (cli({"train", "--dataset", b.dataset.string(), "--out", model.string(), "--preset", "exp3",
             "--steps", "300", "--checkpoint-every", "100"}) != 0)
      return {false, "training failed"};
    std::vector<std::string> bytes;
    for (const auto* f : {"manifest.json", "train.jsonl", "test.jsonl"})
      bytes.push_back(testing::read_file(b.dataset / f));
    for (const auto* f : {"manifest.json", "weights.bin"})
      bytes.push_back(testing::read_file(model / f));
    bytes.push_back(testing::read_file(b.index));
    for (const auto& q : queries) {
      std::string out;
      if (cli({"query", "--model", model.string(), "--index", b.index.string(), "--store",
               b.store.string(), "--text", q, "--k", "10", "--json"},
              &out) != 0)
        return {false, "query failed"};
      bytes.push_back(out);
    }
    runs.push_back(std::move(bytes));
  }
  std::size_t differing = 0;
  for (std::size_t i = 0; i < runs[0].size(); ++i) differing += runs[0][i] != runs[1][i];
  return {differing == 0, fmt("%.0f artifacts compared, %.0f differ",
                              static_cast<double>(runs[0].size()), static_cast<double>(differing))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::set<std::string> only(argv + 1, argv + argc);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"metric-oracle-equivalence", metric_oracle},
      {"grading-buckets", grading_buckets},
      {"gradient-correctness", gradient_check},
      {"surrogate-limit", surrogate_limit},
      {"trainability", trainability},
      {"experiment-trend", trend},
      {"padding-precision-law", padding_precision},
      {"split-hygiene", split_hygiene},
      {"porter-stemmer", porter},
      {"ingestion-round-trip", ingestion},
      {"determinism", determinism},
      {"cohen-kappa", kappa},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed"
                       : std::string("acceptance: all criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
