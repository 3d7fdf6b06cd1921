#pragma once

#include <array>
#include <cmath>

#include "spoilage/domain.hpp"

namespace spoilage {

/// Branch sequence of the rule classifier.
///
/// PaperLiteral: (a) temp > T and hum < H -> Moderate; (b) any field above its
/// threshold -> NoTracking; (c) temp > T and hum > H -> HighEmergency;
/// (d) otherwise Low. Branch (b) subsumes (c), so HighEmergency is never
/// produced in this order.
/// EmergencyFirst: (a), (c), (b), (d).
enum class BranchOrder { PaperLiteral, EmergencyFirst };

enum class ShapingMode { Raw, LogShaped };

struct ShapingConfig {
  ShapingMode mode = ShapingMode::Raw;
  // Lower bound on the log argument; ln(raw + 1) is undefined at raw = -1.
  double floor_epsilon = std::exp(-2.0);

  void validate() const;
};

/// Normalized observation, each component in [0, 1].
using Observation = std::array<double, kFeatureCount>;

SpoilageLevel classify_spoilage(const SensorReading& reading, const SpoilageThresholds& thresholds,
                                BranchOrder order);

/// (value - min) / (max - min), clamped to [0, 1].
Observation normalize_observation(const SensorReading& reading, const NormalizationRanges& ranges);

/// +1 when the chosen action equals the true level, -1 otherwise.
int raw_reward(SpoilageLevel truth, SpoilageLevel action);

/// Raw: identity. LogShaped: ln(max(raw + 1, floor_epsilon)) - 1.
double shape_reward(double raw, const ShapingConfig& config);

}  // namespace spoilage
