#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bugrank {

/// Relevance grades in ranked order. Negative entries are padding: gain 0
/// and never relevant. An entry is relevant when its grade is > 0.
using JudgedList = std::span<const int>;

inline constexpr std::size_t kMetricDepth = 10;

double dcg_at_k(JudgedList l, std::size_t k);
double idcg_at_k(JudgedList l, std::size_t k);
double ndcg_at_k(JudgedList l, std::size_t k);
double precision_at_k(JudgedList l, std::size_t k);
/// `total_relevant` = 0 yields 0.
double recall_at_k(JudgedList l, std::size_t k, std::size_t total_relevant);
std::size_t relevant_count(JudgedList l);
double average_precision(JudgedList l);
/// Relevance-weighted mean 1-based rank; nullopt without relevant entries.
std::optional<double> average_relevance_position(JudgedList l);
/// 1 / rank of the first relevant entry, 0 if none.
double reciprocal_rank(JudgedList l);
/// Throws InvalidArgument on an empty collection.
double mrr(std::span<const std::vector<int>> lists);

struct MetricReport {
  std::array<double, kMetricDepth> ndcg{};
  std::array<double, kMetricDepth> precision{};
  std::array<double, kMetricDepth> recall{};
  double map = 0;  ///< mean of average_precision
  double average_relevance_position = 0;  ///< over queries where it is defined
  double mrr = 0;
  std::size_t queries = 0;

  std::string to_json() const;
  /// Plain-text table: one column per cutoff, rows NDCG / Precision / Recall,
  /// then ARP, MAP and MRR.
  std::string to_table() const;
};

/// Per-query contribution; evaluate() reduces these in query order.
struct QueryMetrics {
  std::array<double, kMetricDepth> ndcg{};
  std::array<double, kMetricDepth> precision{};
  std::array<double, kMetricDepth> recall{};
  double average_precision = 0;
  std::optional<double> arp;
  double reciprocal_rank = 0;
};

QueryMetrics query_metrics(JudgedList ranked);
MetricReport reduce_metrics(std::span<const QueryMetrics> per_query);

/// Orders `labels` by descending score, ties by ascending index; entries with
/// a negative label always go last.
std::vector<int> rank_by_scores(std::span<const double> scores, std::span<const int> labels);

/// Throws InvalidArgument on length mismatch or empty input.
template <typename Label>
double cohen_kappa(std::span<const Label> a, std::span<const Label> b);

double cohen_kappa(const std::vector<int>& a, const std::vector<int>& b);
double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace bugrank
