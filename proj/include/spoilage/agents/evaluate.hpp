#pragma once

#include <functional>
#include <vector>

#include "spoilage/agents/agent.hpp"
#include "spoilage/dataset.hpp"

namespace spoilage::agents {

struct EvalReport {
  std::vector<SpoilageLevel> predictions;
  std::vector<SpoilageLevel> truths;
  std::vector<int> raw_rewards;

  std::size_t steps() const { return predictions.size(); }
};

using PolicyFn = std::function<SpoilageLevel(std::size_t step, const Observation& obs)>;

/// One pass over the dataset with raw rewards, asking `policy` at each step.
EvalReport evaluate_policy(const LabeledDataset& dataset, const NormalizationRanges& ranges,
                           const PolicyFn& policy);

/// Greedy (epsilon = 0) pass using the agent's own observation scaling.
EvalReport evaluate_agent(const TrainedAgent& agent, const LabeledDataset& dataset);

/// Always answers `action`.
EvalReport evaluate_constant(const LabeledDataset& dataset, SpoilageLevel action);

}  // namespace spoilage::agents
