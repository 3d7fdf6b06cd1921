#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "spoilage/dataset.hpp"
#include "spoilage/rules.hpp"

namespace spoilage {

struct StepResult {
  Observation observation{};
  double reward = 0.0;
  bool done = false;
  SpoilageLevel truth = SpoilageLevel::Low;  // label that produced the reward
};

/// Sequential pass over a labeled dataset: reset() shows row 0, every step()
/// is scored against the current row's label and advances one row. The
/// dataset must outlive the environment.
///
/// Transitions are exogenous: the action affects only the reward, never the
/// next observation. An episode is the whole dataset unless `max_steps`
/// caps it.
class SpoilageEnv {
 public:
  SpoilageEnv(const LabeledDataset& dataset, NormalizationRanges ranges,
              ShapingConfig shaping = {}, std::optional<std::size_t> max_steps = std::nullopt);

  Observation reset();
  StepResult step(SpoilageLevel action);

  bool done() const { return step_ >= length_; }
  std::size_t current_step() const { return step_; }
  std::size_t episode_length() const { return length_; }
  const NormalizationRanges& ranges() const { return ranges_; }
  const Observation& observation_at(std::size_t row) const { return observations_.at(row); }

 private:
  const LabeledDataset* dataset_;
  NormalizationRanges ranges_;
  ShapingConfig shaping_;
  std::size_t length_;
  std::size_t step_ = 0;
  std::vector<Observation> observations_;
};

/// Deterministic chain view of a dataset: state t moves to t + 1 whatever
/// the action; R(t, a) is +1 at the label and -1 elsewhere; the state after
/// the last row is terminal with value 0.
struct ChainMdpModel {
  std::vector<std::array<double, kActionCount>> rewards;
  double gamma = 0.0;

  static ChainMdpModel from_dataset(const LabeledDataset& dataset, double gamma);
  std::size_t terminal() const { return rewards.size(); }
};

struct OracleResult {
  std::vector<SpoilageLevel> policy;
  std::vector<std::array<double, kActionCount>> q;
  std::size_t iterations = 0;
};

/// Synchronous Q-value iteration on the chain model until the largest change
/// drops below `tolerance`, then greedy extraction (lowest index on ties).
/// Uses raw rewards.
OracleResult value_iteration_oracle(const LabeledDataset& dataset, double gamma, double tolerance);

}  // namespace spoilage
