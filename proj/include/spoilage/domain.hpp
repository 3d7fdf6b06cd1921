#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "spoilage/errors.hpp"

namespace spoilage {

inline constexpr std::size_t kFeatureCount = 5;
inline constexpr std::size_t kActionCount = 4;

using FeatureArray = std::array<double, kFeatureCount>;

// Field order is fixed everywhere: temperature, humidity, moisture, mq3, mq4.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "temperature", "humidity", "moisture", "mq3", "mq4"};

/// One environmental sample. Units: degrees C, %RH, and raw sensor counts
/// for moisture/MQ3/MQ4. Values are never clamped or rounded.
struct SensorReading {
  double temperature = 0.0;
  double humidity = 0.0;
  double moisture = 0.0;
  double mq3 = 0.0;
  double mq4 = 0.0;

  FeatureArray values() const { return {temperature, humidity, moisture, mq3, mq4}; }
  static SensorReading from_values(const FeatureArray& v) { return {v[0], v[1], v[2], v[3], v[4]}; }

  bool operator==(const SensorReading&) const = default;
};

/// Throws NonFiniteField naming the first NaN/infinite field.
SensorReading validate_reading(const SensorReading& reading);

/// Label and action share one code space: the level the rules assign is the
/// action the agent is rewarded for choosing.
enum class SpoilageLevel : std::uint8_t {
  NoTracking = 0,
  Low = 1,
  Moderate = 2,
  HighEmergency = 3,
};

inline constexpr std::array<SpoilageLevel, kActionCount> kAllLevels{
    SpoilageLevel::NoTracking, SpoilageLevel::Low, SpoilageLevel::Moderate,
    SpoilageLevel::HighEmergency};

constexpr int code(SpoilageLevel level) { return static_cast<int>(level); }
std::optional<SpoilageLevel> level_from_code(long long code);
std::string_view level_name(SpoilageLevel level);
std::string_view action_name(SpoilageLevel level);
std::optional<SpoilageLevel> level_from_name(std::string_view name);
std::optional<SpoilageLevel> level_from_action_name(std::string_view name);

struct SpoilageThresholds {
  double temperature = 30.0;
  double humidity = 70.0;
  double moisture = 250.0;
  double mq3 = 180.0;
  double mq4 = 280.0;

  FeatureArray values() const { return {temperature, humidity, moisture, mq3, mq4}; }
  static SpoilageThresholds from_values(const FeatureArray& v) { return {v[0], v[1], v[2], v[3], v[4]}; }

  /// Throws InvalidConfig unless every threshold is finite and > 0.
  void validate() const;

  bool operator==(const SpoilageThresholds&) const = default;
};

/// Thresholds used for the synthetic dataset.
SpoilageThresholds synthetic_thresholds();
/// Thresholds observed on the collected hardware run. The feed has no
/// moisture channel, so moisture keeps the synthetic threshold.
SpoilageThresholds realtime_thresholds();

struct Range {
  double min = 0.0;
  double max = 1.0;
  bool operator==(const Range&) const = default;
};

class NormalizationRanges {
 public:
  /// Throws InvalidConfig if any range is non-finite or has min >= max.
  explicit NormalizationRanges(const std::array<Range, kFeatureCount>& ranges);

  const Range& operator[](std::size_t feature) const { return ranges_[feature]; }
  const std::array<Range, kFeatureCount>& ranges() const { return ranges_; }

  bool covers(const SpoilageThresholds& thresholds) const;

  bool operator==(const NormalizationRanges&) const = default;

 private:
  std::array<Range, kFeatureCount> ranges_;
};

}  // namespace spoilage
