#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spoilage/agents/agent.hpp"
#include "spoilage/agents/evaluate.hpp"
#include "spoilage/domain.hpp"

namespace spoilage {

/// correct / total, as a fraction.
double spoilage_accuracy(std::span<const SpoilageLevel> predictions,
                         std::span<const SpoilageLevel> truths);

/// Mean reward per step.
double reward_to_step(std::span<const int> rewards);
double reward_to_step(std::span<const double> rewards);

/// (mean of the first `window` losses - mean of the last `window`) / count.
/// Positive when the loss fell.
double loss_decrease_rate(std::span<const double> losses, std::size_t window = 1);

using ClassDistribution = std::array<std::uint64_t, kActionCount>;
ClassDistribution class_distribution(std::span<const SpoilageLevel> predictions);

struct ExplorationSummary {
  double decay_factor = 0.0;
  double final_epsilon = 0.0;
};
ExplorationSummary exploration_decay_summary(const agents::EpsilonSchedule& schedule,
                                             std::uint64_t episodes);

/// Reward-to-step of a raw-reward pass equals 2 * accuracy - 1 exactly:
/// with k matches out of n, (k - (n - k)) / n = 2k/n - 1. Compares the two
/// sides to a few ulps.
bool identity_holds(double accuracy, double reward_to_step_value, double tolerance = 1e-12);

struct MetricsReport {
  std::string agent;
  std::size_t steps = 0;
  double accuracy = 0.0;
  double reward_to_step = 0.0;
  std::optional<double> loss_decrease_rate;
  std::size_t loss_window = 1;
  ExplorationSummary exploration;
  ClassDistribution class_distribution{};
  std::vector<double> episode_rewards;
  std::vector<double> losses;
  bool identity_consistent = false;

  /// Re-derives the flag from the stored accuracy and reward-to-step.
  bool check_identity() const { return identity_holds(accuracy, reward_to_step); }
};

MetricsReport build_report(const std::string& agent_name, const agents::EvalReport& eval,
                           const agents::TrainingSeries& series,
                           const agents::EpsilonSchedule& schedule, std::size_t loss_window = 1);

}  // namespace spoilage
