#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "spoilage/agents/agent.hpp"
#include "spoilage/dataset.hpp"
#include "spoilage/nnet/optimizer.hpp"
#include "spoilage/rules.hpp"

namespace spoilage::agents {

struct TrainConfig {
  AgentKind kind = AgentKind::Hybrid;
  std::size_t episodes = 1000;
  std::size_t batch_size = 64;
  double gamma = 0.95;
  nnet::OptimizerConfig optimizer;
  ShapingConfig shaping;
  std::uint64_t seed = 42;
  InputLayout layout;
  std::size_t replay_capacity = 10000;
  std::size_t updates_per_step = 1;
  /// Transitions stored before learning starts; unset means batch_size.
  /// Learning never starts before a full batch is available.
  std::optional<std::size_t> min_fill;
  EpsilonSchedule schedule;
  std::size_t hidden = 64;
  nnet::Activation rnn_activation = nnet::Activation::Tanh;
  nnet::OutputPeephole output_peephole = nnet::OutputPeephole::CurrentCell;
  /// Copy the online network into a separate bootstrap network every this
  /// many updates; 0 bootstraps from the online network itself.
  std::size_t target_sync = 0;
  /// Episode length cap; unset runs the whole dataset.
  std::optional<std::size_t> max_steps;
  /// Observation scaling; unset uses default_ranges(dataset).
  std::optional<NormalizationRanges> ranges;

  void validate() const;
  std::size_t effective_min_fill() const;
  nnet::NetworkShape network_shape() const;
};

/// Deep Q-learning with experience replay over one of the four network
/// topologies. Deterministic for a given (dataset, config).
TrainedAgent train_dqn(const LabeledDataset& dataset, const TrainConfig& config);

}  // namespace spoilage::agents
