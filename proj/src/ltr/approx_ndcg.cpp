#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "bugrank/approx_ndcg.hpp"
#include "bugrank/error.hpp"

namespace bugrank {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double gain(int label) { return label > 0 ? std::exp2(static_cast<double>(label)) - 1.0 : 0.0; }

struct Prepared {
  std::vector<std::size_t> real;  // positions of non-padding entries
  std::vector<double> rank;       // approximate rank per real entry
  double ideal = 0;
};

Prepared prepare(std::span<const double> scores, std::span<const int> labels,
                 double temperature) {
  if (scores.size() != labels.size())
    throw InvalidArgument("approx_ndcg: scores and labels differ in length");
  if (!(temperature > 0)) throw InvalidArgument("approx_ndcg: temperature must be positive");
  Prepared p;
  std::vector<double> gains;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    p.real.push_back(i);
    gains.push_back(gain(labels[i]));
  }
  std::sort(gains.begin(), gains.end(), std::greater<>());
  for (std::size_t i = 0; i < gains.size(); ++i)
    p.ideal += gains[i] / std::log2(static_cast<double>(i) + 2.0);
  if (p.ideal <= 0) return p;

  p.rank.assign(p.real.size(), 1.0);
  for (std::size_t a = 0; a < p.real.size(); ++a)
    for (std::size_t b = 0; b < p.real.size(); ++b)
      if (a != b) p.rank[a] += sigmoid((scores[p.real[b]] - scores[p.real[a]]) / temperature);
  return p;
}

}  // namespace

double approx_ndcg_loss(std::span<const double> scores, std::span<const int> labels,
                        double temperature) {
  const auto p = prepare(scores, labels, temperature);
  if (p.ideal <= 0) return 0.0;
  double sum = 0;
  for (std::size_t a = 0; a < p.real.size(); ++a)
    sum += gain(labels[p.real[a]]) / std::log2(1.0 + p.rank[a]);
  return -sum / p.ideal;
}

double approx_ndcg_loss_grad(std::span<const double> scores, std::span<const int> labels,
                             double temperature, std::span<double> grad) {
  if (grad.size() != scores.size())
    throw InvalidArgument("approx_ndcg: gradient buffer has the wrong length");
  std::fill(grad.begin(), grad.end(), 0.0);
  const auto p = prepare(scores, labels, temperature);
  if (p.ideal <= 0) return 0.0;

  const std::size_t n = p.real.size();
  // a[i] = dL/d rank_i
  std::vector<double> a(n);
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gain(labels[p.real[i]]);
    const double d = std::log2(1.0 + p.rank[i]);
    sum += g / d;
    a[i] = g / (p.ideal * d * d * (1.0 + p.rank[i]) * std::numbers::ln2);
  }
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const double s = sigmoid((scores[p.real[k]] - scores[p.real[i]]) / temperature);
      acc += s * (1.0 - s) * (a[i] - a[k]);
    }
    grad[p.real[k]] = acc / temperature;
  }
  return -sum / p.ideal;
}

}  // namespace bugrank
