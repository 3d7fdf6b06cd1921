#include "spoilage/env.hpp"

#include <algorithm>
#include <cmath>

namespace spoilage {

SpoilageEnv::SpoilageEnv(const LabeledDataset& dataset, NormalizationRanges ranges,
                         ShapingConfig shaping, std::optional<std::size_t> max_steps)
    : dataset_(&dataset), ranges_(std::move(ranges)), shaping_(shaping), length_(dataset.size()) {
  shaping_.validate();
  if (dataset.size() == 0) throw EmptyDataset();
  if (max_steps) {
    if (*max_steps == 0) throw InvalidConfig("max steps must be >= 1");
    length_ = std::min(length_, *max_steps);
  }
  observations_.reserve(dataset.size());
  for (const auto& row : dataset.rows()) {
    observations_.push_back(normalize_observation(row.reading, ranges_));
  }
}

Observation SpoilageEnv::reset() {
  step_ = 0;
  return observations_[0];
}

StepResult SpoilageEnv::step(SpoilageLevel action) {
  if (done()) throw SteppedAfterDone();
  const SpoilageLevel truth = (*dataset_)[step_].level;
  StepResult result;
  result.truth = truth;
  result.reward = shape_reward(raw_reward(truth, action), shaping_);
  ++step_;
  result.done = done();
  result.observation = result.done ? observations_[length_ - 1] : observations_[step_];
  return result;
}

ChainMdpModel ChainMdpModel::from_dataset(const LabeledDataset& dataset, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidConfig("gamma must lie in [0, 1)");
  ChainMdpModel model;
  model.gamma = gamma;
  model.rewards.resize(dataset.size());
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    for (SpoilageLevel a : kAllLevels) {
      model.rewards[t][code(a)] = raw_reward(dataset[t].level, a);
    }
  }
  return model;
}

OracleResult value_iteration_oracle(const LabeledDataset& dataset, double gamma, double tolerance) {
  if (!(tolerance > 0.0)) throw InvalidConfig("tolerance must be > 0");
  const ChainMdpModel model = ChainMdpModel::from_dataset(dataset, gamma);
  const std::size_t n = model.terminal();

  OracleResult result;
  result.q.assign(n, {});
  std::vector<std::array<double, kActionCount>> next(n);
  while (true) {
    double change = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      // Successor is t + 1 with probability 1 for every action.
      double successor_value = 0.0;
      if (t + 1 < n) {
        const auto& qs = result.q[t + 1];
        successor_value = *std::max_element(qs.begin(), qs.end());
      }
      for (std::size_t a = 0; a < kActionCount; ++a) {
        next[t][a] = model.rewards[t][a] + gamma * successor_value;
        change = std::max(change, std::abs(next[t][a] - result.q[t][a]));
      }
    }
    result.q.swap(next);
    ++result.iterations;
    if (change < tolerance) break;
  }

  result.policy.reserve(n);
  for (const auto& qs : result.q) {
    const auto best = std::max_element(qs.begin(), qs.end()) - qs.begin();
    result.policy.push_back(static_cast<SpoilageLevel>(best));
  }
  return result;
}

}  // namespace spoilage
