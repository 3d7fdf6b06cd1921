#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spoilage/domain.hpp"
#include "spoilage/rules.hpp"

namespace spoilage {

struct FeatureDistribution {
  double mean = 0.0;
  double stddev = 0.0;
  bool operator==(const FeatureDistribution&) const = default;
};

/// Synthetic generation parameters. Each field is drawn as
/// Normal(mean, stddev) + Normal(noise_mean, noise_sigma).
struct GenConfig {
  std::array<FeatureDistribution, kFeatureCount> features{{
      {25.0, 5.0},    // temperature
      {60.0, 10.0},   // humidity
      {200.0, 50.0},  // moisture
      {150.0, 30.0},  // mq3
      {250.0, 30.0},  // mq4
  }};
  double noise_mean = 0.0;
  double noise_sigma = 5.0;
  SpoilageThresholds thresholds = synthetic_thresholds();
  BranchOrder order = BranchOrder::EmergencyFirst;
  std::size_t rows = 1000;
  std::uint64_t seed = 42;

  void validate() const;
  /// sqrt(stddev^2 + noise_sigma^2) for one field.
  double total_stddev(std::size_t feature) const;

  bool operator==(const GenConfig&) const = default;
};

/// Default normalization for generated data: mean +/- 4 total standard
/// deviations, widened where needed so every threshold lies inside.
NormalizationRanges ranges_from_config(const GenConfig& config);

struct LabeledRow {
  SensorReading reading;
  SpoilageLevel level = SpoilageLevel::Low;
  bool operator==(const LabeledRow&) const = default;
};

/// The rule that produced a dataset's labels.
struct LabelRule {
  SpoilageThresholds thresholds;
  BranchOrder order = BranchOrder::EmergencyFirst;
};

struct GeneratedSource {
  GenConfig config;
};
struct FileSource {
  std::string path;
};
using Provenance = std::variant<GeneratedSource, FileSource>;

/// Ordered labeled readings. Construction enforces: at least one row, finite
/// readings, and (when a rule is recorded) every label equals the rule applied
/// to its reading. Datasets read back from CSV carry no rule; their labels
/// are taken as recorded.
class LabeledDataset {
 public:
  LabeledDataset(std::vector<LabeledRow> rows, Provenance provenance,
                 std::optional<LabelRule> rule = std::nullopt);

  std::size_t size() const { return rows_.size(); }
  const std::vector<LabeledRow>& rows() const { return rows_; }
  const LabeledRow& operator[](std::size_t i) const { return rows_[i]; }
  const Provenance& provenance() const { return provenance_; }
  const std::optional<LabelRule>& rule() const { return rule_; }

  std::vector<SpoilageLevel> labels() const;
  std::string source_description() const;

 private:
  std::vector<LabeledRow> rows_;
  Provenance provenance_;
  std::optional<LabelRule> rule_;
};

/// Per-field data min/max, extended to include the thresholds. A field whose
/// values and threshold coincide is widened by +/-1 so the range stays valid.
NormalizationRanges ranges_from_data(const std::vector<LabeledRow>& rows,
                                     const SpoilageThresholds& thresholds);

/// Generated datasets use ranges_from_config; everything else uses the data
/// extent (with the recorded rule's thresholds, or the synthetic defaults).
NormalizationRanges default_ranges(const LabeledDataset& dataset);

/// Index of the first row whose label disagrees with the rule, if any.
std::optional<std::size_t> first_label_mismatch(const std::vector<LabeledRow>& rows,
                                                const LabelRule& rule);

}  // namespace spoilage
