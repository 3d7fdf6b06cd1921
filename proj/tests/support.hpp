#pragma once

#include <vector>

#include "spoilage/dataset.hpp"
#include "spoilage/random.hpp"

namespace spoilage::test {

// Rows with random readings and the given labels. No rule is recorded, so the
// labels stand as given.
inline LabeledDataset dataset_with_labels(const std::vector<int>& labels, std::uint64_t seed = 1) {
  Rng rng(seed);
  std::vector<LabeledRow> rows;
  for (int label : labels) {
    SensorReading r{rng.uniform(15, 35), rng.uniform(40, 80), rng.uniform(100, 300), rng.uniform(100, 200),
                    rng.uniform(200, 300)};
    rows.push_back({r, static_cast<SpoilageLevel>(label)});
  }
  return LabeledDataset(std::move(rows), FileSource{"test"});
}

inline std::vector<int> random_labels(Rng& rng, std::size_t n) {
  std::vector<int> labels(n);
  for (auto& l : labels) l = static_cast<int>(rng.uniform_index(4));
  return labels;
}

}  // namespace spoilage::test
