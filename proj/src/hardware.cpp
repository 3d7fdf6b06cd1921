#include "spoilage/hardware.hpp"

#include <cmath>
#include <istream>
#include <string>

#include "spoilage/errors.hpp"
#include "spoilage/text.hpp"

namespace spoilage::hardware {

namespace {

constexpr std::array<std::string_view, 4> kKeys = {"T", "H", "MQ3", "MQ4"};

std::array<double, 4> values_of(const SensorLogRecord& r) { return {r.temperature, r.humidity, r.mq3, r.mq4}; }

}  // namespace

void HardwareThresholds::validate() const {
  for (double v : {temperature, mq3, mq4}) {
    if (!std::isfinite(v) || v <= 0.0) throw InvalidConfig("hardware thresholds must be finite and > 0");
  }
}

ActuatorState actuate(const SensorLogRecord& record, const HardwareThresholds& thresholds) {
  ActuatorState s;
  if (record.temperature > thresholds.temperature) {
    s.servo_angle = 180;
    s.led1 = true;
  }
  if (record.mq3 > thresholds.mq3) {
    s.servo_angle = 90;
    s.led2 = true;
  }
  if (record.mq4 > thresholds.mq4) {
    s.servo_angle = 90;
    s.led3 = true;
  }
  return s;
}

SensorLogRecord parse_serial_line(std::string_view line, std::size_t line_number) {
  const auto fields = split(trim(line), ';');
  if (fields.size() != kKeys.size()) throw MalformedLine(line_number);
  std::array<double, 4> v{};
  for (std::size_t k = 0; k < kKeys.size(); ++k) {
    const std::string_view field = trim(fields[k]);
    const auto eq = field.find('=');
    if (eq == std::string_view::npos || trim(field.substr(0, eq)) != kKeys[k]) throw MalformedLine(line_number);
    const auto value = parse_double(trim(field.substr(eq + 1)));
    if (!value || !std::isfinite(*value)) throw MalformedLine(line_number);
    v[k] = *value;
  }
  return SensorLogRecord{0, v[0], v[1], v[2], v[3]};
}

ParseResult parse_serial_log(std::istream& in, ParseMode mode) {
  ParseResult result;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    strip_cr(line);
    if (trim(line).empty()) continue;
    try {
      SensorLogRecord r = parse_serial_line(line, number);
      r.sequence = result.records.size();
      result.records.push_back(r);
    } catch (const MalformedLine&) {
      if (mode == ParseMode::Strict) throw;
      ++result.warnings;
      result.skipped_lines.push_back(number);
    }
  }
  return result;
}

std::string format_record(const SensorLogRecord& record) {
  const auto v = values_of(record);
  std::string s;
  for (std::size_t k = 0; k < kKeys.size(); ++k) {
    if (k) s += ';';
    s += kKeys[k];
    s += '=';
    s += format_exact(v[k]);
  }
  return s;
}

LogSummary summarize_log(const std::vector<SensorLogRecord>& records) {
  if (records.size() < 2) throw TooFewRecords(records.size());
  std::array<double, 4> mean{}, m2{};
  std::size_t n = 0;
  for (const auto& r : records) {
    ++n;
    const auto v = values_of(r);
    for (std::size_t k = 0; k < 4; ++k) {
      const double delta = v[k] - mean[k];
      mean[k] += delta / static_cast<double>(n);
      m2[k] += delta * (v[k] - mean[k]);
    }
  }
  LogSummary summary;
  summary.count = n;
  for (std::size_t k = 0; k < 4; ++k) {
    summary.fields[k] = {mean[k], std::sqrt(m2[k] / static_cast<double>(n - 1))};
  }
  return summary;
}

std::string format_summary(const LogSummary& summary) {
  std::string out = "records " + std::to_string(summary.count) + "\n";
  for (std::size_t k = 0; k < 4; ++k) {
    out += std::string(kLogFieldNames[k]) + " mean " + format_fixed(summary.fields[k].mean, 4) + " std " +
           format_fixed(summary.fields[k].stddev, 4) + "\n";
  }
  return out;
}

LabeledDataset log_to_dataset(const std::vector<SensorLogRecord>& records, const IngestConfig& config,
                              const std::string& source) {
  if (records.empty()) throw EmptyDataset();
  config.thresholds.validate();
  if (!std::isfinite(config.default_moisture)) throw InvalidConfig("default moisture must be finite");
  std::vector<LabeledRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    const SensorReading reading{r.temperature, r.humidity, config.default_moisture, r.mq3, r.mq4};
    rows.push_back({reading, classify_spoilage(reading, config.thresholds, config.order)});
  }
  return LabeledDataset(std::move(rows), FileSource{source}, LabelRule{config.thresholds, config.order});
}

}  // namespace spoilage::hardware
