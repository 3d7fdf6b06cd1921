#pragma once

#include <cstdint>
#include <vector>

#include "spoilage/nnet/qnetwork.hpp"

namespace spoilage::nnet {

/// A minibatch of transitions, one column per sample in every step matrix.
struct TdBatch {
  Sequence states;
  Sequence next_states;
  std::vector<int> actions;
  std::vector<double> rewards;
  std::vector<std::uint8_t> done;

  std::size_t size() const { return actions.size(); }
};

/// Inputs with fixed per-sample targets for the chosen action.
struct RegressionBatch {
  Sequence inputs;
  std::vector<int> actions;
  std::vector<double> targets;

  std::size_t size() const { return actions.size(); }
};

struct LossResult {
  double loss = 0.0;
  QNetworkParams gradient;
};

/// y = r + gamma * max_a' Q(s', a'), or y = r when done. The bootstrap term
/// uses `target_params` when given, otherwise `params` itself.
RegressionBatch freeze_td_targets(const QNetworkParams& params, const TdBatch& batch, double gamma,
                                  const QNetworkParams* target_params = nullptr);

/// mean_b (target_b - Q(x_b, a_b))^2 and its gradient.
LossResult regression_loss(const QNetworkParams& params, const RegressionBatch& batch);
double regression_loss_value(const QNetworkParams& params, const RegressionBatch& batch);

/// Semi-gradient TD loss: targets are treated as constants.
LossResult td_loss(const QNetworkParams& params, const TdBatch& batch, double gamma,
                   const QNetworkParams* target_params = nullptr);

}  // namespace spoilage::nnet
