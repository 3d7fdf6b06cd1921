#include "spoilage/synthgen.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "spoilage/text.hpp"

namespace spoilage {

SensorReading sample_row(Rng& rng, const GenConfig& config) {
  FeatureArray v{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double base = rng.normal(config.features[i].mean, config.features[i].stddev);
    const double noise = rng.normal(config.noise_mean, config.noise_sigma);
    v[i] = base + noise;
  }
  return SensorReading::from_values(v);
}

LabeledDataset generate_dataset(const GenConfig& config) {
  config.validate();
  Rng rng(config.seed);
  std::vector<LabeledRow> rows;
  rows.reserve(config.rows);
  for (std::size_t r = 0; r < config.rows; ++r) {
    const SensorReading reading = sample_row(rng, config);
    rows.push_back({reading, classify_spoilage(reading, config.thresholds, config.order)});
  }
  return LabeledDataset(std::move(rows), GeneratedSource{config},
                        LabelRule{config.thresholds, config.order});
}

std::size_t write_rows_csv(std::span<const LabeledRow> rows, std::ostream& out) {
  if (rows.empty()) throw EmptyDataset();
  std::string text;
  text.reserve(64 * (rows.size() + 1));
  text.append(kDatasetCsvHeader);
  text.push_back('\n');
  for (const auto& row : rows) {
    for (double v : row.reading.values()) {
      append_fixed(text, v, 6);
      text.push_back(',');
    }
    text.append(std::to_string(code(row.level)));
    text.push_back('\n');
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("failed to write dataset CSV");
  return text.size();
}

std::size_t write_dataset_csv(const LabeledDataset& dataset, std::ostream& out) {
  return write_rows_csv(dataset.rows(), out);
}

std::size_t write_dataset_csv(const LabeledDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  return write_dataset_csv(dataset, out);
}

LabeledDataset read_dataset_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw MalformedHeader();
  strip_cr(line);
  if (line != kDatasetCsvHeader) throw MalformedHeader();

  std::vector<LabeledRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto fields = split(line, ',');
    if (fields.size() != kFeatureCount + 1) throw MalformedRow(line_no);
    FeatureArray v{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const auto parsed = parse_double(fields[i]);
      if (!parsed || !std::isfinite(*parsed)) throw MalformedRow(line_no);
      v[i] = *parsed;
    }
    const auto level_code = parse_integer(fields[kFeatureCount]);
    if (!level_code) throw MalformedRow(line_no);
    const auto level = level_from_code(*level_code);
    if (!level) throw LevelOutOfRange(line_no);
    rows.push_back({SensorReading::from_values(v), *level});
  }
  return LabeledDataset(std::move(rows), FileSource{source});
}

LabeledDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  return read_dataset_csv(in, path.string());
}

}  // namespace spoilage
