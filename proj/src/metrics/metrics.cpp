#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "bugrank/error.hpp"
#include "bugrank/metrics.hpp"

namespace bugrank {

namespace {

double gain(int rel) { return rel > 0 ? std::exp2(static_cast<double>(rel)) - 1.0 : 0.0; }
bool relevant(int rel) { return rel > 0; }

void require_k(std::size_t k) {
  if (k == 0) throw InvalidArgument("metric cutoff k must be >= 1");
}

}  // namespace

double dcg_at_k(JudgedList l, std::size_t k) {
  require_k(k);
  double sum = 0;
  const std::size_t n = std::min(k, l.size());
  for (std::size_t i = 0; i < n; ++i) sum += gain(l[i]) / std::log2(static_cast<double>(i) + 2.0);
  return sum;
}

double idcg_at_k(JudgedList l, std::size_t k) {
  std::vector<int> ideal(l.begin(), l.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  return dcg_at_k(ideal, k);
}

double ndcg_at_k(JudgedList l, std::size_t k) {
  const double ideal = idcg_at_k(l, k);
  return ideal > 0 ? dcg_at_k(l, k) / ideal : 0.0;
}

double precision_at_k(JudgedList l, std::size_t k) {
  require_k(k);
  const std::size_t n = std::min(k, l.size());
  const auto hits = std::count_if(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(n), relevant);
  return static_cast<double>(hits) / static_cast<double>(k);
}

double recall_at_k(JudgedList l, std::size_t k, std::size_t total_relevant) {
  require_k(k);
  if (total_relevant == 0) return 0.0;
  const std::size_t n = std::min(k, l.size());
  const auto hits = std::count_if(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(n), relevant);
  return static_cast<double>(hits) / static_cast<double>(total_relevant);
}

std::size_t relevant_count(JudgedList l) {
  return static_cast<std::size_t>(std::count_if(l.begin(), l.end(), relevant));
}

double average_precision(JudgedList l) {
  const std::size_t total = relevant_count(l);
  if (total == 0) return 0.0;
  double sum = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (!relevant(l[i])) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(total);
}

std::optional<double> average_relevance_position(JudgedList l) {
  double weighted = 0, mass = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (!relevant(l[i])) continue;
    weighted += static_cast<double>(l[i]) * static_cast<double>(i + 1);
    mass += static_cast<double>(l[i]);
  }
  if (mass == 0) return std::nullopt;
  return weighted / mass;
}

double reciprocal_rank(JudgedList l) {
  for (std::size_t i = 0; i < l.size(); ++i)
    if (relevant(l[i])) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

double mrr(std::span<const std::vector<int>> lists) {
  if (lists.empty()) throw InvalidArgument("mrr of an empty collection");
  double sum = 0;
  for (const auto& l : lists) sum += reciprocal_rank(l);
  return sum / static_cast<double>(lists.size());
}

QueryMetrics query_metrics(JudgedList ranked) {
  QueryMetrics q;
  const std::size_t total = relevant_count(ranked);
  for (std::size_t k = 1; k <= kMetricDepth; ++k) {
    q.ndcg[k - 1] = ndcg_at_k(ranked, k);
    q.precision[k - 1] = precision_at_k(ranked, k);
    q.recall[k - 1] = recall_at_k(ranked, k, total);
  }
  q.average_precision = average_precision(ranked);
  q.arp = average_relevance_position(ranked);
  q.reciprocal_rank = reciprocal_rank(ranked);
  return q;
}

MetricReport reduce_metrics(std::span<const QueryMetrics> per_query) {
  if (per_query.empty()) throw InvalidArgument("cannot evaluate an empty test set");
  MetricReport r;
  std::size_t arp_count = 0;
  for (const auto& q : per_query) {
    for (std::size_t k = 0; k < kMetricDepth; ++k) {
      r.ndcg[k] += q.ndcg[k];
      r.precision[k] += q.precision[k];
      r.recall[k] += q.recall[k];
    }
    r.map += q.average_precision;
    r.mrr += q.reciprocal_rank;
    if (q.arp) {
      r.average_relevance_position += *q.arp;
      ++arp_count;
    }
  }
  const double n = static_cast<double>(per_query.size());
  for (std::size_t k = 0; k < kMetricDepth; ++k) {
    r.ndcg[k] /= n;
    r.precision[k] /= n;
    r.recall[k] /= n;
  }
  r.map /= n;
  r.mrr /= n;
  if (arp_count > 0) r.average_relevance_position /= static_cast<double>(arp_count);
  r.queries = per_query.size();
  return r;
}

std::vector<int> rank_by_scores(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw InvalidArgument("rank_by_scores: scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool pad_a = labels[a] < 0, pad_b = labels[b] < 0;
    if (pad_a != pad_b) return pad_b;
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  std::vector<int> ranked;
  ranked.reserve(order.size());
  for (const auto i : order) ranked.push_back(labels[i]);
  return ranked;
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["queries"] = queries;
  j["ndcg"] = ndcg;
  j["precision"] = precision;
  j["recall"] = recall;
  j["map"] = map;
  j["average_relevance_position"] = average_relevance_position;
  j["mrr"] = mrr;
  return j.dump(2);
}

std::string MetricReport::to_table() const {
  std::ostringstream out;
  out << std::fixed;
  out << std::left << std::setw(10) << "K";
  for (std::size_t k = 1; k <= kMetricDepth; ++k) out << std::right << std::setw(7) << k;
  out << '\n';
  const auto row = [&](const char* name, const std::array<double, kMetricDepth>& v) {
    out << std::left << std::setw(10) << name;
    for (const double x : v) out << std::right << std::setw(7) << std::setprecision(3) << x;
    out << '\n';
  };
  row("NDCG", ndcg);
  row("Precision", precision);
  row("Recall", recall);
  out << std::setprecision(4);
  out << "ARP  " << average_relevance_position << '\n';
  out << "MAP  " << map << '\n';
  out << "MRR  " << mrr << '\n';
  out << "queries  " << queries << '\n';
  return out.str();
}

template <typename Label>
double cohen_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw InvalidArgument("cohen_kappa: rating lists differ in length");
  if (a.empty()) throw InvalidArgument("cohen_kappa: empty rating lists");
  std::map<Label, std::pair<std::size_t, std::size_t>> marginals;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  const double n = static_cast<double>(a.size());
  const double observed = static_cast<double>(agree) / n;
  std::uint64_t products = 0;
  for (const auto& [label, m] : marginals) products += m.first * m.second;
  const double chance = static_cast<double>(products) / (n * n);
  if (chance >= 1.0) return observed >= 1.0 ? 1.0 : 0.0;
  return (observed - chance) / (1.0 - chance);
}

template double cohen_kappa<int>(std::span<const int>, std::span<const int>);
template double cohen_kappa<std::string>(std::span<const std::string>,
                                         std::span<const std::string>);

double cohen_kappa(const std::vector<int>& a, const std::vector<int>& b) {
  return cohen_kappa<int>(std::span<const int>(a), std::span<const int>(b));
}

double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return cohen_kappa<std::string>(std::span<const std::string>(a),
                                  std::span<const std::string>(b));
}

}  // namespace bugrank
