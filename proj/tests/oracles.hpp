#pragma once

// Reference implementations written directly from the formulas, without
// sharing code with the library. Slow on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

inline double gain(int rel) { return rel > 0 ? std::pow(2.0, rel) - 1.0 : 0.0; }

inline double dcg(const std::vector<int>& l, std::size_t k) {
  double s = 0;
  for (std::size_t i = 1; i <= k && i <= l.size(); ++i) s += gain(l[i - 1]) / std::log2(i + 1.0);
  return s;
}

/// Ideal DCG by trying every distinct ordering; keep lists short.
inline double idcg_bruteforce(std::vector<int> l, std::size_t k) {
  std::sort(l.begin(), l.end());
  double best = 0;
  do best = std::max(best, dcg(l, k));
  while (std::next_permutation(l.begin(), l.end()));
  return best;
}

/// Brute-force ideal DCG for every cutoff 1..kmax in one enumeration.
inline std::vector<double> idcg_all_cutoffs(std::vector<int> l, std::size_t kmax) {
  std::sort(l.begin(), l.end());
  std::vector<double> best(kmax + 1, 0.0);
  do {
    double s = 0;
    for (std::size_t k = 1; k <= kmax; ++k) {
      if (k <= l.size()) s += gain(l[k - 1]) / std::log2(k + 1.0);
      best[k] = std::max(best[k], s);
    }
  } while (std::next_permutation(l.begin(), l.end()));
  return best;
}

inline double ndcg(const std::vector<int>& l, std::size_t k) {
  const double ideal = idcg_bruteforce(l, k);
  return ideal == 0 ? 0.0 : dcg(l, k) / ideal;
}

inline bool rel(int g) { return g > 0; }

inline double precision(const std::vector<int>& l, std::size_t k) {
  double tp = 0;
  for (std::size_t i = 0; i < k && i < l.size(); ++i) tp += rel(l[i]);
  return tp / static_cast<double>(k);
}

inline double recall(const std::vector<int>& l, std::size_t k) {
  double tp = 0, total = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    total += rel(l[i]);
    if (i < k) tp += rel(l[i]);
  }
  return total == 0 ? 0.0 : tp / total;
}

/// Sum over k of (R@k - R@(k-1)) * P@k.
inline double average_precision(const std::vector<int>& l) {
  double ap = 0, prev = 0;
  for (std::size_t k = 1; k <= l.size(); ++k) {
    const double r = recall(l, k);
    ap += (r - prev) * precision(l, k);
    prev = r;
  }
  return ap;
}

inline std::optional<double> arp(const std::vector<int>& l) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < l.size(); ++i)
    if (l[i] > 0) {
      num += l[i] * static_cast<double>(i + 1);
      den += l[i];
    }
  if (den == 0) return std::nullopt;
  return num / den;
}

inline double reciprocal_rank(const std::vector<int>& l) {
  for (std::size_t i = 0; i < l.size(); ++i)
    if (rel(l[i])) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

/// Kappa from an explicit confusion matrix.
template <typename T>
double kappa(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> labels(a);
  labels.insert(labels.end(), b.begin(), b.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  const std::size_t m = labels.size();
  std::vector<std::vector<double>> cm(m, std::vector<double>(m, 0));
  const auto idx = [&](const T& v) {
    return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), v) -
                                    labels.begin());
  };
  for (std::size_t i = 0; i < a.size(); ++i) cm[idx(a[i])][idx(b[i])] += 1;
  const double n = static_cast<double>(a.size());
  double trace = 0, marginal_products = 0;
  for (std::size_t i = 0; i < m; ++i) {
    trace += cm[i][i];
    double row = 0, col = 0;
    for (std::size_t j = 0; j < m; ++j) {
      row += cm[i][j];
      col += cm[j][i];
    }
    marginal_products += row * col;
  }
  const double po = trace / n;
  const double pe = marginal_products / (n * n);
  if (pe == 1.0) return po == 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1 - pe);
}

/// Days since 1970-01-01 for a civil date (proleptic Gregorian).
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace oracle
