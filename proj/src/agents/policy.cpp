#include "spoilage/agents/policy.hpp"

#include <algorithm>
#include <cmath>

#include "spoilage/errors.hpp"

namespace spoilage::agents {

void EpsilonSchedule::validate() const {
  if (!(decay > 0.0 && decay <= 1.0)) throw InvalidConfig("epsilon decay must lie in (0, 1]");
  if (!(floor >= 0.0 && floor <= initial && initial <= 1.0)) {
    throw InvalidConfig("epsilon schedule needs 0 <= floor <= initial <= 1");
  }
}

double EpsilonSchedule::after(std::uint64_t episodes) const {
  return std::max(floor, initial * std::pow(decay, static_cast<double>(episodes)));
}

double decay_epsilon(double epsilon, const EpsilonSchedule& schedule) {
  return std::max(schedule.floor, epsilon * schedule.decay);
}

SpoilageLevel greedy_action(std::span<const double, kActionCount> q) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < kActionCount; ++a) {
    if (q[a] > q[best]) best = a;
  }
  return static_cast<SpoilageLevel>(best);
}

SpoilageLevel select_action(std::span<const double, kActionCount> q, double epsilon, Rng& rng) {
  return select_action_lazy([&] {
    std::array<double, kActionCount> copy{};
    std::copy(q.begin(), q.end(), copy.begin());
    return copy;
  }, epsilon, rng);
}

}  // namespace spoilage::agents
