#include "spoilage/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace spoilage {

void GenConfig::validate() const {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const auto& f = features[i];
    if (!std::isfinite(f.mean) || !std::isfinite(f.stddev) || f.stddev < 0.0) {
      throw InvalidConfig("distribution for " + std::string(kFeatureNames[i]) +
                          " needs a finite mean and stddev >= 0");
    }
  }
  if (!std::isfinite(noise_mean) || !std::isfinite(noise_sigma) || noise_sigma < 0.0) {
    throw InvalidConfig("noise needs a finite mean and sigma >= 0");
  }
  if (rows < 1) throw InvalidConfig("row count must be >= 1");
  thresholds.validate();
}

double GenConfig::total_stddev(std::size_t feature) const {
  const double s = features[feature].stddev;
  return std::sqrt(s * s + noise_sigma * noise_sigma);
}

namespace {

Range widen_to_cover(Range r, double threshold) {
  r.min = std::min(r.min, threshold);
  r.max = std::max(r.max, threshold);
  if (!(r.min < r.max)) {
    r.min -= 1.0;
    r.max += 1.0;
  }
  return r;
}

}  // namespace

NormalizationRanges ranges_from_config(const GenConfig& config) {
  config.validate();
  const FeatureArray t = config.thresholds.values();
  std::array<Range, kFeatureCount> ranges{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double centre = config.features[i].mean + config.noise_mean;
    const double half = 4.0 * config.total_stddev(i);
    ranges[i] = widen_to_cover({centre - half, centre + half}, t[i]);
  }
  return NormalizationRanges(ranges);
}

LabeledDataset::LabeledDataset(std::vector<LabeledRow> rows, Provenance provenance,
                               std::optional<LabelRule> rule)
    : rows_(std::move(rows)), provenance_(std::move(provenance)), rule_(std::move(rule)) {
  if (rows_.empty()) throw EmptyDataset();
  for (const auto& row : rows_) validate_reading(row.reading);
  if (rule_) {
    rule_->thresholds.validate();
    if (auto bad = first_label_mismatch(rows_, *rule_)) {
      throw DataError("row " + std::to_string(*bad) +
                      " label disagrees with the recorded classification rule");
    }
  }
}

std::vector<SpoilageLevel> LabeledDataset::labels() const {
  std::vector<SpoilageLevel> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.push_back(row.level);
  return out;
}

std::string LabeledDataset::source_description() const {
  if (const auto* gen = std::get_if<GeneratedSource>(&provenance_)) {
    return "generated(seed=" + std::to_string(gen->config.seed) + ")";
  }
  return "file(" + std::get<FileSource>(provenance_).path + ")";
}

NormalizationRanges ranges_from_data(const std::vector<LabeledRow>& rows,
                                     const SpoilageThresholds& thresholds) {
  if (rows.empty()) throw EmptyDataset();
  std::array<Range, kFeatureCount> ranges{};
  const FeatureArray first = rows.front().reading.values();
  for (std::size_t i = 0; i < kFeatureCount; ++i) ranges[i] = {first[i], first[i]};
  for (const auto& row : rows) {
    const FeatureArray v = row.reading.values();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      ranges[i].min = std::min(ranges[i].min, v[i]);
      ranges[i].max = std::max(ranges[i].max, v[i]);
    }
  }
  const FeatureArray t = thresholds.values();
  for (std::size_t i = 0; i < kFeatureCount; ++i) ranges[i] = widen_to_cover(ranges[i], t[i]);
  return NormalizationRanges(ranges);
}

NormalizationRanges default_ranges(const LabeledDataset& dataset) {
  if (const auto* gen = std::get_if<GeneratedSource>(&dataset.provenance())) {
    return ranges_from_config(gen->config);
  }
  const SpoilageThresholds t = dataset.rule() ? dataset.rule()->thresholds : synthetic_thresholds();
  return ranges_from_data(dataset.rows(), t);
}

std::optional<std::size_t> first_label_mismatch(const std::vector<LabeledRow>& rows,
                                                const LabelRule& rule) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (classify_spoilage(rows[i].reading, rule.thresholds, rule.order) != rows[i].level) return i;
  }
  return std::nullopt;
}

}  // namespace spoilage
