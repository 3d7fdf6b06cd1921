#include "spoilage/nnet/optimizer.hpp"

#include <cmath>

#include "spoilage/errors.hpp"

namespace spoilage::nnet {

std::string_view optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::Sgd ? "sgd" : "adam";
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0 && std::isfinite(learning_rate))) {
    throw InvalidConfig("learning rate must be positive and finite");
  }
  if (kind == OptimizerKind::Adam) {
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
      throw InvalidConfig("Adam betas must lie in [0, 1)");
    }
    if (!(epsilon > 0.0)) throw InvalidConfig("Adam epsilon must be > 0");
  }
}

Optimizer::Optimizer(OptimizerConfig config) : config_(config) { config_.validate(); }

void Optimizer::step(QNetworkParams& params, const QNetworkParams& gradient) {
  if (!params.same_shape(gradient)) throw ShapeMismatch("gradient does not match parameters");
  auto p_spans = params.spans();
  const auto g_spans = gradient.spans();
  const double lr = config_.learning_rate;

  if (config_.kind == OptimizerKind::Sgd) {
    for (std::size_t k = 0; k < p_spans.size(); ++k) {
      for (std::size_t i = 0; i < p_spans[k].size(); ++i) p_spans[k][i] -= lr * g_spans[k][i];
    }
    ++t_;
    return;
  }

  const std::size_t count = params.parameter_count();
  if (t_ == 0) {
    m_.assign(count, 0.0);
    v_.assign(count, 0.0);
  } else if (m_.size() != count) {
    throw ShapeMismatch("parameter count changed between optimizer steps");
  }
  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double step_size = lr / c1;
  const double eps = config_.epsilon;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < p_spans.size(); ++k) {
    const auto n = static_cast<Eigen::Index>(p_spans[k].size());
    Eigen::Map<Eigen::ArrayXd> p(p_spans[k].data(), n);
    Eigen::Map<const Eigen::ArrayXd> g(g_spans[k].data(), n);
    Eigen::Map<Eigen::ArrayXd> m(m_.data() + offset, n);
    Eigen::Map<Eigen::ArrayXd> v(v_.data() + offset, n);
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.square();
    // m_hat / (sqrt(v_hat) + eps) with the bias corrections folded in.
    p -= step_size * m / ((v / c2).sqrt() + eps);
    offset += static_cast<std::size_t>(n);
  }
}

}  // namespace spoilage::nnet
