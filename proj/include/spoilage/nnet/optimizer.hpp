#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "spoilage/nnet/qnetwork.hpp"

namespace spoilage::nnet {

enum class OptimizerKind { Sgd, Adam };

std::string_view optimizer_name(OptimizerKind kind);

// Adam defaults; SGD uses only learning_rate.
struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// Holds the moment estimates for one parameter set. The first step fixes
/// the parameter layout; later steps must match it.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config = {});

  void step(QNetworkParams& params, const QNetworkParams& gradient);

  const OptimizerConfig& config() const { return config_; }
  std::uint64_t steps_taken() const { return t_; }

 private:
  OptimizerConfig config_;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

}  // namespace spoilage::nnet
