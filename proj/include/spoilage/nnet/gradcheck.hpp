#pragma once

#include <cstddef>
#include <cstdint>

#include "spoilage/nnet/loss.hpp"

namespace spoilage::nnet {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;  // flat position in spans() order
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;

  bool passed(double tolerance = 1e-4) const { return max_relative_error < tolerance; }
};

/// Compares the analytic gradient of regression_loss against central
/// differences (f(p + eps) - f(p - eps)) / 2eps for every parameter.
/// Error per entry is |a - n| / max(1, |a|, |n|).
GradCheckResult grad_check(const QNetworkParams& params, const RegressionBatch& batch,
                           double fd_epsilon = 1e-5);

/// Same comparison against a caller-supplied gradient.
GradCheckResult grad_check(const QNetworkParams& params, const RegressionBatch& batch,
                           const QNetworkParams& analytic, double fd_epsilon = 1e-5);

/// TD targets are frozen at the current parameters before checking.
GradCheckResult grad_check_td(const QNetworkParams& params, const TdBatch& batch, double gamma,
                              double fd_epsilon = 1e-5);

struct GradCheckCase {
  QNetworkParams params;
  RegressionBatch batch;
};

/// Seeded random network of the given shape with a random regression batch:
/// inputs uniform in [0, 1), actions uniform over the four outputs, targets
/// uniform in [-1, 1).
GradCheckCase random_grad_check_case(Topology topology, const NetworkShape& shape, std::size_t batch,
                                     std::uint64_t seed);

}  // namespace spoilage::nnet
