#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "spoilage/nnet/layers.hpp"
#include "spoilage/rules.hpp"

namespace spoilage::agents {

/// How an observation becomes network input.
///   Scalars:   one reading as a length-5 sequence of single features.
///   Window(W): the last W readings as a length-W sequence of 5-vectors;
///              after reset the first reading fills the whole window.
/// Flat encodings are time-major: element t * features() + f.
struct InputLayout {
  enum class Kind { Scalars, Window };
  Kind kind = Kind::Scalars;
  std::size_t window = 1;

  static InputLayout scalars() { return {}; }
  static InputLayout sliding_window(std::size_t w) { return {Kind::Window, w}; }

  void validate() const;
  std::size_t steps() const { return kind == Kind::Scalars ? kFeatureCount : window; }
  std::size_t features() const { return kind == Kind::Scalars ? 1 : kFeatureCount; }
  std::size_t width() const { return steps() * features(); }

  /// "scalars" or "window:<W>".
  std::string name() const;
  static InputLayout parse(const std::string& text);

  bool operator==(const InputLayout&) const = default;
};

class ObservationEncoder {
 public:
  explicit ObservationEncoder(InputLayout layout);

  const std::vector<double>& reset(const Observation& first);
  const std::vector<double>& push(const Observation& next);
  const std::vector<double>& current() const { return encoding_; }

 private:
  void rebuild();

  InputLayout layout_;
  std::deque<Observation> history_;
  std::vector<double> encoding_;
};

/// Encodings of a whole pass over `observations`, in order; row k encodes
/// the state after observation k has been shown.
std::vector<std::vector<double>> encode_pass(const InputLayout& layout,
                                             const std::vector<Observation>& observations);

/// Columns of `encodings` (width x batch) as a network input sequence.
nnet::Sequence to_sequence(const InputLayout& layout, const nnet::Matrix& encodings);

}  // namespace spoilage::agents
