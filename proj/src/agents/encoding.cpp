#include "spoilage/agents/encoding.hpp"

#include "spoilage/errors.hpp"
#include "spoilage/text.hpp"

namespace spoilage::agents {

void InputLayout::validate() const {
  if (kind == Kind::Window && (window == 0 || window > 256)) {
    throw InvalidConfig("window length must lie in [1, 256]");
  }
}

std::string InputLayout::name() const {
  return kind == Kind::Scalars ? std::string("scalars") : "window:" + std::to_string(window);
}

InputLayout InputLayout::parse(const std::string& text) {
  if (text == "scalars") return scalars();
  const std::string prefix = "window:";
  if (text.rfind(prefix, 0) == 0) {
    const auto w = parse_integer(text.substr(prefix.size()));
    if (w && *w >= 1) {
      InputLayout layout = sliding_window(static_cast<std::size_t>(*w));
      layout.validate();
      return layout;
    }
  }
  throw InvalidConfig("input layout must be 'scalars' or 'window:<W>', got '" + text + "'");
}

ObservationEncoder::ObservationEncoder(InputLayout layout) : layout_(layout) {
  layout_.validate();
  encoding_.assign(layout_.width(), 0.0);
}

const std::vector<double>& ObservationEncoder::reset(const Observation& first) {
  history_.assign(layout_.kind == InputLayout::Kind::Scalars ? 1 : layout_.window, first);
  rebuild();
  return encoding_;
}

const std::vector<double>& ObservationEncoder::push(const Observation& next) {
  if (history_.empty()) return reset(next);
  history_.pop_front();
  history_.push_back(next);
  rebuild();
  return encoding_;
}

void ObservationEncoder::rebuild() {
  std::size_t k = 0;
  for (const auto& obs : history_) {
    for (double v : obs) encoding_[k++] = v;
  }
}

std::vector<std::vector<double>> encode_pass(const InputLayout& layout,
                                             const std::vector<Observation>& observations) {
  std::vector<std::vector<double>> out;
  out.reserve(observations.size());
  ObservationEncoder enc(layout);
  for (std::size_t k = 0; k < observations.size(); ++k) {
    out.push_back(k == 0 ? enc.reset(observations[k]) : enc.push(observations[k]));
  }
  return out;
}

nnet::Sequence to_sequence(const InputLayout& layout, const nnet::Matrix& encodings) {
  if (static_cast<std::size_t>(encodings.rows()) != layout.width()) {
    throw ShapeMismatch("encoding width does not match the input layout");
  }
  const auto f = static_cast<Eigen::Index>(layout.features());
  nnet::Sequence seq(layout.steps());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    seq[t] = encodings.middleRows(static_cast<Eigen::Index>(t) * f, f);
  }
  return seq;
}

}  // namespace spoilage::agents
