#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spoilage/metrics.hpp"

namespace spoilage {

/// Report JSON fields (one object per agent):
///   agent, steps, spoilage_accuracy, reward_to_step_ratio,
///   loss_decrease_rate (null when no losses, with loss_window),
///   exploration_rate_decay {decay_factor, final_epsilon},
///   spoilage_class_distribution {"0".."3": count},
///   identity_consistent, episodes, updates.
/// Series are written separately as CSV.
nlohmann::json report_to_json(const MetricsReport& report);
nlohmann::json class_distribution_json(const ClassDistribution& counts);

/// "{0: a, 1: b, 2: c, 3: d}".
std::string format_distribution(const ClassDistribution& counts);

/// Fixed-width text table, one row per report, columns: agent, accuracy,
/// reward-to-step, loss decrease rate, exploration decay (factor and final
/// epsilon), class distribution.
std::string render_table(std::span<const MetricsReport> reports);

/// CSV with header `index,value`, values in shortest round-trip form.
void write_series_csv(std::ostream& out, std::span<const double> values);
void write_series_csv(const std::filesystem::path& path, std::span<const double> values);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace spoilage
