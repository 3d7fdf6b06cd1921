#include "spoilage/nnet/loss.hpp"

#include <algorithm>

#include "spoilage/errors.hpp"

namespace spoilage::nnet {

namespace {

void check_batch(const Sequence& inputs, std::size_t n) {
  if (n == 0) throw EmptyBatch();
  if (inputs.empty()) throw ShapeMismatch("batch has no input steps");
  for (const auto& x : inputs) {
    if (static_cast<std::size_t>(x.cols()) != n) throw ShapeMismatch("batch columns differ from sample count");
  }
}

void check_actions(const std::vector<int>& actions) {
  for (int a : actions) {
    if (a < 0 || a >= static_cast<int>(kQOutputs)) throw ShapeMismatch("action index out of range");
  }
}

}  // namespace

RegressionBatch freeze_td_targets(const QNetworkParams& params, const TdBatch& batch, double gamma,
                                  const QNetworkParams* target_params) {
  const std::size_t n = batch.size();
  check_batch(batch.states, n);
  check_batch(batch.next_states, n);
  if (batch.rewards.size() != n || batch.done.size() != n) {
    throw ShapeMismatch("transition fields differ in length");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidConfig("gamma must lie in [0, 1)");
  check_actions(batch.actions);

  RegressionBatch out;
  out.inputs = batch.states;
  out.actions = batch.actions;
  out.targets = batch.rewards;

  const bool any_live = std::any_of(batch.done.begin(), batch.done.end(), [](auto d) { return d == 0; });
  if (any_live && gamma > 0.0) {
    const Matrix q_next = qnet_forward(target_params ? *target_params : params, batch.next_states);
    for (std::size_t b = 0; b < n; ++b) {
      if (!batch.done[b]) out.targets[b] += gamma * q_next.col(static_cast<Eigen::Index>(b)).maxCoeff();
    }
  }
  return out;
}

LossResult regression_loss(const QNetworkParams& params, const RegressionBatch& batch) {
  const std::size_t n = batch.size();
  check_batch(batch.inputs, n);
  if (batch.targets.size() != n) throw ShapeMismatch("targets differ in length from actions");
  check_actions(batch.actions);

  ForwardCache cache;
  const Matrix q = qnet_forward(params, batch.inputs, &cache);
  Matrix d_q = Matrix::Zero(q.rows(), q.cols());
  LossResult result;
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t b = 0; b < n; ++b) {
    const auto col = static_cast<Eigen::Index>(b);
    const double residual = q(batch.actions[b], col) - batch.targets[b];
    result.loss += residual * residual * scale;
    d_q(batch.actions[b], col) = 2.0 * residual * scale;
  }
  result.gradient = backward(params, cache, d_q);
  return result;
}

double regression_loss_value(const QNetworkParams& params, const RegressionBatch& batch) {
  const std::size_t n = batch.size();
  check_batch(batch.inputs, n);
  const Matrix q = qnet_forward(params, batch.inputs);
  double loss = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    const double residual = q(batch.actions[b], static_cast<Eigen::Index>(b)) - batch.targets[b];
    loss += residual * residual;
  }
  return loss / static_cast<double>(n);
}

LossResult td_loss(const QNetworkParams& params, const TdBatch& batch, double gamma,
                   const QNetworkParams* target_params) {
  return regression_loss(params, freeze_td_targets(params, batch, gamma, target_params));
}

}  // namespace spoilage::nnet
