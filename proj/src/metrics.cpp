#include "spoilage/metrics.hpp"

#include <cmath>
#include <numeric>

#include "spoilage/errors.hpp"

namespace spoilage {

double spoilage_accuracy(std::span<const SpoilageLevel> predictions,
                         std::span<const SpoilageLevel> truths) {
  if (predictions.size() != truths.size()) throw LengthMismatch(predictions.size(), truths.size());
  if (predictions.empty()) throw EmptyInput("spoilage accuracy");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) correct += predictions[i] == truths[i];
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double reward_to_step(std::span<const int> rewards) {
  if (rewards.empty()) throw EmptyInput("reward-to-step");
  // Integer sum keeps the ratio exact for +-1 rewards.
  const long long sum = std::accumulate(rewards.begin(), rewards.end(), 0LL);
  return static_cast<double>(sum) / static_cast<double>(rewards.size());
}

double reward_to_step(std::span<const double> rewards) {
  if (rewards.empty()) throw EmptyInput("reward-to-step");
  return std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(rewards.size());
}

double loss_decrease_rate(std::span<const double> losses, std::size_t window) {
  if (window == 0) throw InvalidConfig("loss window must be >= 1");
  if (losses.size() < 2 * window) throw TooFewLosses(losses.size(), 2 * window);
  const auto w = static_cast<std::ptrdiff_t>(window);
  const double first = std::accumulate(losses.begin(), losses.begin() + w, 0.0) / static_cast<double>(window);
  const double last = std::accumulate(losses.end() - w, losses.end(), 0.0) / static_cast<double>(window);
  return (first - last) / static_cast<double>(losses.size());
}

ClassDistribution class_distribution(std::span<const SpoilageLevel> predictions) {
  ClassDistribution counts{};
  for (SpoilageLevel p : predictions) ++counts[static_cast<std::size_t>(code(p))];
  return counts;
}

ExplorationSummary exploration_decay_summary(const agents::EpsilonSchedule& schedule,
                                             std::uint64_t episodes) {
  return {schedule.decay, schedule.after(episodes)};
}

bool identity_holds(double accuracy, double reward_to_step_value, double tolerance) {
  return std::abs(reward_to_step_value - (2.0 * accuracy - 1.0)) <= tolerance;
}

MetricsReport build_report(const std::string& agent_name, const agents::EvalReport& eval,
                           const agents::TrainingSeries& series,
                           const agents::EpsilonSchedule& schedule, std::size_t loss_window) {
  MetricsReport r;
  r.agent = agent_name;
  r.steps = eval.steps();
  r.accuracy = spoilage_accuracy(eval.predictions, eval.truths);
  r.reward_to_step = reward_to_step(std::span<const int>(eval.raw_rewards));
  if (series.losses.size() >= 2 * loss_window) {
    r.loss_decrease_rate = loss_decrease_rate(series.losses, loss_window);
  }
  r.loss_window = loss_window;
  r.exploration = exploration_decay_summary(schedule, series.epsilons.size());
  r.class_distribution = class_distribution(eval.predictions);
  r.episode_rewards = series.episode_rewards;
  r.losses = series.losses;
  r.identity_consistent = r.check_identity();
  return r;
}

}  // namespace spoilage
