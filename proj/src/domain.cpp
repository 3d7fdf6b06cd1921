#include "spoilage/domain.hpp"

#include <cmath>
#include <string>

namespace spoilage {

namespace {

constexpr std::array<std::string_view, kActionCount> kLevelNames{
    "NoTracking", "Low", "Moderate", "HighEmergency"};
constexpr std::array<std::string_view, kActionCount> kActionNames{
    "ContinueRoutine", "MildAlert", "AdjustStorage", "EmergencyIntervention"};

}  // namespace

SensorReading validate_reading(const SensorReading& reading) {
  const FeatureArray v = reading.values();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!std::isfinite(v[i])) throw NonFiniteField(std::string(kFeatureNames[i]));
  }
  return reading;
}

std::optional<SpoilageLevel> level_from_code(long long c) {
  if (c < 0 || c >= static_cast<long long>(kActionCount)) return std::nullopt;
  return static_cast<SpoilageLevel>(c);
}

std::string_view level_name(SpoilageLevel level) { return kLevelNames[code(level)]; }

std::string_view action_name(SpoilageLevel level) { return kActionNames[code(level)]; }

std::optional<SpoilageLevel> level_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kActionCount; ++i) {
    if (kLevelNames[i] == name) return static_cast<SpoilageLevel>(i);
  }
  return std::nullopt;
}

std::optional<SpoilageLevel> level_from_action_name(std::string_view name) {
  for (std::size_t i = 0; i < kActionCount; ++i) {
    if (kActionNames[i] == name) return static_cast<SpoilageLevel>(i);
  }
  return std::nullopt;
}

void SpoilageThresholds::validate() const {
  const FeatureArray v = values();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) {
      throw InvalidConfig("threshold for " + std::string(kFeatureNames[i]) +
                          " must be finite and positive");
    }
  }
}

SpoilageThresholds synthetic_thresholds() { return {30.0, 70.0, 250.0, 180.0, 280.0}; }

SpoilageThresholds realtime_thresholds() { return {28.5, 92.0, 250.0, 270.0, 340.0}; }

NormalizationRanges::NormalizationRanges(const std::array<Range, kFeatureCount>& ranges)
    : ranges_(ranges) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const Range& r = ranges_[i];
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || !(r.min < r.max)) {
      throw InvalidConfig("normalization range for " + std::string(kFeatureNames[i]) +
                          " needs finite min < max");
    }
  }
}

bool NormalizationRanges::covers(const SpoilageThresholds& thresholds) const {
  const FeatureArray t = thresholds.values();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (t[i] < ranges_[i].min || t[i] > ranges_[i].max) return false;
  }
  return true;
}

}  // namespace spoilage
