#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "spoilage/agents/agent.hpp"
#include "spoilage/dataset.hpp"

namespace spoilage::agents {

struct McConfig {
  std::size_t bins = 10;
  double gamma = 0.95;
  EpsilonSchedule schedule;
  bool first_visit = true;
  std::size_t episodes = 1000;
  std::uint64_t seed = 42;
  std::optional<std::size_t> max_steps;
  std::optional<NormalizationRanges> ranges;

  void validate() const;
};

/// Monte Carlo control: epsilon-greedy rollouts over the tabular Q, then
/// discounted suffix returns G_t = r_t + gamma * G_{t+1} of the raw rewards
/// update Q(s_t, a_t) as a running mean (first visit per episode by
/// default). Series: per-episode raw reward totals and epsilons; no losses.
TrainedAgent train_monte_carlo(const LabeledDataset& dataset, const McConfig& config);

/// Bound on any return: sum_{t < horizon} gamma^t.
double return_bound(double gamma, std::size_t horizon);

}  // namespace spoilage::agents
