#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "spoilage/dataset.hpp"
#include "spoilage/domain.hpp"
#include "spoilage/rules.hpp"

namespace spoilage::hardware {

/// Actuation thresholds. Humidity takes part in classification only.
struct HardwareThresholds {
  double temperature = 28.5;
  double mq3 = 270.0;
  double mq4 = 340.0;

  void validate() const;
};

struct ActuatorState {
  int servo_angle = 0;  // 0, 90 or 180
  bool led1 = false;
  bool led2 = false;
  bool led3 = false;

  bool operator==(const ActuatorState&) const = default;
};

/// One serial reading. The feed carries four channels; there is no moisture.
struct SensorLogRecord {
  std::uint64_t sequence = 0;  // ordinal among accepted records
  double temperature = 0.0;
  double humidity = 0.0;
  double mq3 = 0.0;
  double mq4 = 0.0;

  bool operator==(const SensorLogRecord&) const = default;
};

inline constexpr std::array<std::string_view, 4> kLogFieldNames = {"temperature", "humidity", "mq3",
                                                                   "mq4"};

/// Firmware decision, in order: temperature above threshold turns the servo
/// to 180 and LED1 on; MQ3 above threshold turns it to 90 and LED2 on; MQ4
/// above threshold turns it to 90 and LED3 on. Later conditions overwrite
/// the angle, LEDs accumulate, and nothing firing leaves the servo at 0.
ActuatorState actuate(const SensorLogRecord& record, const HardwareThresholds& thresholds);

enum class ParseMode { Strict, Lenient };

struct ParseResult {
  std::vector<SensorLogRecord> records;
  std::size_t warnings = 0;                 // malformed lines skipped (lenient)
  std::vector<std::size_t> skipped_lines;  // their 1-based line numbers
};

/// Line grammar, one reading per line:
///   T=<real>;H=<real>;MQ3=<real>;MQ4=<real>
/// Keys are case-sensitive and in this order; values are decimal reals that
/// must be finite; spaces around fields and a trailing CR are ignored.
/// Blank lines are skipped. Strict mode throws MalformedLine(n) at the first
/// bad line; lenient mode skips and counts it.
ParseResult parse_serial_log(std::istream& in, ParseMode mode = ParseMode::Strict);

/// Parses one line; throws MalformedLine(line_number) when it does not match.
SensorLogRecord parse_serial_line(std::string_view line, std::size_t line_number = 1);

/// Grammar form of a record with shortest round-trip values.
std::string format_record(const SensorLogRecord& record);

struct FieldStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation
};

struct LogSummary {
  std::size_t count = 0;
  std::array<FieldStats, 4> fields{};  // in kLogFieldNames order
};

/// Single-pass (Welford) mean and sample standard deviation per field.
/// Throws TooFewRecords below two records.
LogSummary summarize_log(const std::vector<SensorLogRecord>& records);

std::string format_summary(const LogSummary& summary);

struct IngestConfig {
  SpoilageThresholds thresholds = realtime_thresholds();
  BranchOrder order = BranchOrder::EmergencyFirst;
  double default_moisture = 200.0;
};

/// Records in order as a labeled dataset; moisture is filled with the
/// configured default and labels come from classify_spoilage. The rule and
/// `source` are recorded. Observation scaling is left to default_ranges.
LabeledDataset log_to_dataset(const std::vector<SensorLogRecord>& records, const IngestConfig& config,
                              const std::string& source);

}  // namespace spoilage::hardware
