#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "spoilage/dataset.hpp"
#include "spoilage/random.hpp"

namespace spoilage {

/// Draws one reading. Consumes exactly ten normal variates from `rng`, in
/// field order, base draw then noise draw for each field.
SensorReading sample_row(Rng& rng, const GenConfig& config);

/// Generates config.rows readings from a stream seeded with config.seed and
/// labels each (after noise) with classify_spoilage.
LabeledDataset generate_dataset(const GenConfig& config);

inline constexpr std::string_view kDatasetCsvHeader = "Temperature,Humidity,Moisture,MQ3,MQ4,Level";

/// CSV with the fixed header, six fractional digits per reading and a bare
/// integer level; LF line endings. Returns the number of bytes written.
std::size_t write_rows_csv(std::span<const LabeledRow> rows, std::ostream& out);
std::size_t write_dataset_csv(const LabeledDataset& dataset, std::ostream& out);
std::size_t write_dataset_csv(const LabeledDataset& dataset, const std::filesystem::path& path);

/// Parses the format written above. `source` names the input in provenance.
LabeledDataset read_dataset_csv(std::istream& in, const std::string& source);
LabeledDataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace spoilage
