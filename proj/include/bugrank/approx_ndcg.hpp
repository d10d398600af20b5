#pragma once

#include <span>

namespace bugrank {

/// ApproxNDCG surrogate: hard ranks are replaced by
///   r(i) = 1 + sum_{j != i} sigmoid((s_j - s_i) / temperature)
/// and the loss is -(1/IDCG) * sum_i (2^l_i - 1) / log2(1 + r(i)).
/// Entries with negative labels are padding and take no part. Lists without
/// positive gain have loss 0.
double approx_ndcg_loss(std::span<const double> scores, std::span<const int> labels,
                        double temperature);

/// Same loss; writes d(loss)/d(score_i) into `grad` (0 for padding).
double approx_ndcg_loss_grad(std::span<const double> scores, std::span<const int> labels,
                             double temperature, std::span<double> grad);

}  // namespace bugrank
