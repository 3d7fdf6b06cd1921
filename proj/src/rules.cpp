#include "spoilage/rules.hpp"

#include <algorithm>

namespace spoilage {

void ShapingConfig::validate() const {
  if (!(floor_epsilon > 0.0) || !std::isfinite(floor_epsilon)) {
    throw InvalidConfig("shaping floor epsilon must be finite and > 0");
  }
}

SpoilageLevel classify_spoilage(const SensorReading& reading, const SpoilageThresholds& thresholds,
                                BranchOrder order) {
  const bool hot = reading.temperature > thresholds.temperature;
  const bool moderate = hot && reading.humidity < thresholds.humidity;
  const bool emergency = hot && reading.humidity > thresholds.humidity;

  const FeatureArray v = reading.values();
  const FeatureArray t = thresholds.values();
  bool any_exceeds = false;
  for (std::size_t i = 0; i < kFeatureCount; ++i) any_exceeds = any_exceeds || v[i] > t[i];

  if (moderate) return SpoilageLevel::Moderate;
  if (order == BranchOrder::EmergencyFirst && emergency) return SpoilageLevel::HighEmergency;
  if (any_exceeds) return SpoilageLevel::NoTracking;
  if (emergency) return SpoilageLevel::HighEmergency;  // unreachable: any_exceeds covers it
  return SpoilageLevel::Low;
}

Observation normalize_observation(const SensorReading& reading, const NormalizationRanges& ranges) {
  const FeatureArray v = reading.values();
  Observation obs{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const Range& r = ranges[i];
    obs[i] = std::clamp((v[i] - r.min) / (r.max - r.min), 0.0, 1.0);
  }
  return obs;
}

int raw_reward(SpoilageLevel truth, SpoilageLevel action) { return truth == action ? 1 : -1; }

double shape_reward(double raw, const ShapingConfig& config) {
  if (config.mode == ShapingMode::Raw) return raw;
  return std::log(std::max(raw + 1.0, config.floor_epsilon)) - 1.0;
}

}  // namespace spoilage
