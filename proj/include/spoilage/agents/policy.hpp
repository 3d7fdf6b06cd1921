#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "spoilage/domain.hpp"
#include "spoilage/random.hpp"

namespace spoilage::agents {

/// Per-episode multiplicative decay with a floor.
struct EpsilonSchedule {
  double initial = 1.0;
  double decay = 0.9997;
  double floor = 0.01;

  void validate() const;
  /// Closed form after n decays: max(floor, initial * decay^n).
  double after(std::uint64_t episodes) const;
};

double decay_epsilon(double epsilon, const EpsilonSchedule& schedule);

/// Lowest index among the maxima.
SpoilageLevel greedy_action(std::span<const double, kActionCount> q);

/// Draws u ~ U[0,1) first; u < epsilon explores uniformly over the four
/// actions, otherwise the greedy action is taken. The draw sequence is the
/// same whichever branch runs, so both overloads consume the stream alike.
SpoilageLevel select_action(std::span<const double, kActionCount> q, double epsilon, Rng& rng);

/// Same decision, but the Q-values are computed only when exploiting.
template <class QFn>
SpoilageLevel select_action_lazy(QFn&& q_values, double epsilon, Rng& rng) {
  if (rng.uniform() < epsilon) return static_cast<SpoilageLevel>(rng.uniform_index(kActionCount));
  const std::array<double, kActionCount> q = q_values();
  return greedy_action(q);
}

}  // namespace spoilage::agents
