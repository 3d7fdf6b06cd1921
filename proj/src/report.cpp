#include "spoilage/report.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "spoilage/errors.hpp"
#include "spoilage/text.hpp"

namespace spoilage {

nlohmann::json class_distribution_json(const ClassDistribution& counts) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t a = 0; a < counts.size(); ++a) j[std::to_string(a)] = counts[a];
  return j;
}

nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json j;
  j["agent"] = report.agent;
  j["steps"] = report.steps;
  j["spoilage_accuracy"] = report.accuracy;
  j["reward_to_step_ratio"] = report.reward_to_step;
  j["loss_decrease_rate"] =
      report.loss_decrease_rate ? nlohmann::json(*report.loss_decrease_rate) : nlohmann::json(nullptr);
  j["loss_window"] = report.loss_window;
  j["exploration_rate_decay"] = {{"decay_factor", report.exploration.decay_factor},
                                 {"final_epsilon", report.exploration.final_epsilon}};
  j["spoilage_class_distribution"] = class_distribution_json(report.class_distribution);
  j["identity_consistent"] = report.identity_consistent;
  j["episodes"] = report.episode_rewards.size();
  j["updates"] = report.losses.size();
  return j;
}

std::string format_distribution(const ClassDistribution& counts) {
  std::string s = "{";
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (a) s += ", ";
    s += std::to_string(a) + ": " + std::to_string(counts[a]);
  }
  return s + "}";
}

std::string render_table(std::span<const MetricsReport> reports) {
  const std::vector<std::string> header = {"Agent", "Accuracy", "Reward/Step", "Loss Decrease",
                                           "Eps Decay", "Final Eps", "Class Distribution"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    rows.push_back({r.agent, format_fixed(r.accuracy, 4), format_fixed(r.reward_to_step, 4),
                    r.loss_decrease_rate ? format_fixed(*r.loss_decrease_rate, 6) : "N/A",
                    format_exact(r.exploration.decay_factor), format_fixed(r.exploration.final_epsilon, 5),
                    format_distribution(r.class_distribution)});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out += "  ";
      out += cells[c];
      if (c + 1 < cells.size()) out.append(width[c] - cells[c].size(), ' ');
    }
    out += '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out.append(total + 2 * (width.size() - 1), '-');
  out += '\n';
  for (const auto& row : rows) emit(row);
  return out;
}

void write_series_csv(std::ostream& out, std::span<const double> values) {
  out << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_exact(values[i]) << '\n';
}

void write_series_csv(const std::filesystem::path& path, std::span<const double> values) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_series_csv(out, values);
  if (!out) throw DataError("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << value.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace spoilage
