#include "spoilage/agents/evaluate.hpp"

#include "spoilage/env.hpp"

namespace spoilage::agents {

EvalReport evaluate_policy(const LabeledDataset& dataset, const NormalizationRanges& ranges,
                           const PolicyFn& policy) {
  SpoilageEnv env(dataset, ranges);
  EvalReport report;
  report.predictions.reserve(dataset.size());
  Observation obs = env.reset();
  while (!env.done()) {
    const SpoilageLevel action = policy(env.current_step(), obs);
    const StepResult step = env.step(action);
    report.predictions.push_back(action);
    report.truths.push_back(step.truth);
    report.raw_rewards.push_back(static_cast<int>(step.reward));
    obs = step.observation;
  }
  return report;
}

EvalReport evaluate_agent(const TrainedAgent& agent, const LabeledDataset& dataset) {
  SpoilageEnv env(dataset, agent.ranges);
  std::vector<Observation> observations;
  observations.reserve(dataset.size());
  for (std::size_t t = 0; t < dataset.size(); ++t) observations.push_back(env.observation_at(t));
  // The pass is exogenous, so every step's values can be computed up front.
  const auto q = agent.q_values(observations);
  return evaluate_policy(dataset, agent.ranges, [&](std::size_t step, const Observation&) {
    return greedy_action(q[step]);
  });
}

EvalReport evaluate_constant(const LabeledDataset& dataset, SpoilageLevel action) {
  return evaluate_policy(dataset, default_ranges(dataset),
                         [action](std::size_t, const Observation&) { return action; });
}

}  // namespace spoilage::agents
