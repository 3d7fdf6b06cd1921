#include "spoilage/agents/dqn.hpp"

#include <algorithm>

#include "spoilage/agents/replay_buffer.hpp"
#include "spoilage/env.hpp"
#include "spoilage/errors.hpp"
#include "spoilage/nnet/loss.hpp"

namespace spoilage::agents {

namespace {

// Independent sub-streams of the run seed.
enum Stream : std::uint64_t { kInit = 1, kExplore = 2, kReplay = 3 };

nnet::Matrix gather(const ReplayBuffer& buffer, const std::vector<std::size_t>& idx, bool next) {
  nnet::Matrix m(static_cast<Eigen::Index>(buffer.encoding_size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const auto s = next ? buffer.next_state(idx[j]) : buffer.state(idx[j]);
    std::copy(s.begin(), s.end(), m.col(static_cast<Eigen::Index>(j)).data());
  }
  return m;
}

}  // namespace

void TrainConfig::validate() const {
  if (kind == AgentKind::MonteCarlo) throw InvalidConfig("train_dqn needs a network agent");
  if (episodes == 0) throw InvalidConfig("episodes must be >= 1");
  if (batch_size == 0) throw InvalidConfig("batch size must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidConfig("gamma must lie in [0, 1)");
  if (replay_capacity < batch_size) throw InvalidConfig("replay capacity must hold at least one batch");
  if (hidden == 0) throw InvalidConfig("hidden width must be >= 1");
  if (max_steps && *max_steps == 0) throw InvalidConfig("max steps must be >= 1");
  optimizer.validate();
  shaping.validate();
  layout.validate();
  schedule.validate();
}

std::size_t TrainConfig::effective_min_fill() const {
  return std::max(min_fill.value_or(batch_size), batch_size);
}

nnet::NetworkShape TrainConfig::network_shape() const {
  nnet::NetworkShape shape;
  shape.input_features = layout.features();
  shape.sequence_length = layout.steps();
  shape.hidden = hidden;
  shape.rnn_activation = rnn_activation;
  shape.output_peephole = output_peephole;
  return shape;
}

TrainedAgent train_dqn(const LabeledDataset& dataset, const TrainConfig& config) {
  config.validate();
  TrainedAgent agent;
  agent.kind = config.kind;
  agent.layout = config.layout;
  agent.ranges = config.ranges.value_or(default_ranges(dataset));
  agent.schedule = config.schedule;

  Rng init_rng(derive_seed(config.seed, kInit));
  Rng explore_rng(derive_seed(config.seed, kExplore));
  Rng replay_rng(derive_seed(config.seed, kReplay));

  nnet::QNetworkParams net = nnet::make_qnetwork(topology_for(config.kind), config.network_shape(), init_rng);
  std::optional<nnet::QNetworkParams> target;
  if (config.target_sync > 0) target = net;
  nnet::Optimizer optimizer(config.optimizer);

  SpoilageEnv env(dataset, agent.ranges, config.shaping, config.max_steps);
  ObservationEncoder encoder(config.layout);
  ReplayBuffer buffer(config.replay_capacity, config.layout.width());
  const std::size_t min_fill = config.effective_min_fill();
  const auto width = static_cast<Eigen::Index>(config.layout.width());

  nnet::Matrix single(width, 1);
  auto greedy_q = [&](const std::vector<double>& state) {
    std::copy(state.begin(), state.end(), single.data());
    const nnet::Matrix q = nnet::qnet_forward(net, to_sequence(config.layout, single));
    std::array<double, kActionCount> out{};
    for (std::size_t a = 0; a < kActionCount; ++a) out[a] = q(static_cast<Eigen::Index>(a), 0);
    return out;
  };

  std::size_t updates = 0;
  double epsilon = config.schedule.initial;
  std::vector<double> state;
  for (std::size_t episode = 0; episode < config.episodes; ++episode) {
    agent.series.epsilons.push_back(epsilon);
    state = encoder.reset(env.reset());
    double total = 0.0;
    while (!env.done()) {
      const SpoilageLevel action = select_action_lazy([&] { return greedy_q(state); }, epsilon, explore_rng);
      const StepResult step = env.step(action);
      const std::vector<double>& next = encoder.push(step.observation);
      buffer.push(state, code(action), step.reward, next, step.done);
      total += step.reward;

      if (buffer.size() >= min_fill) {
        for (std::size_t u = 0; u < config.updates_per_step; ++u) {
          const auto idx = buffer.sample_indices(config.batch_size, replay_rng);
          nnet::TdBatch batch;
          batch.states = to_sequence(config.layout, gather(buffer, idx, false));
          batch.next_states = to_sequence(config.layout, gather(buffer, idx, true));
          for (std::size_t i : idx) {
            batch.actions.push_back(buffer.action(i));
            batch.rewards.push_back(buffer.reward(i));
            batch.done.push_back(buffer.done(i) ? 1 : 0);
          }
          const nnet::LossResult result =
              nnet::td_loss(net, batch, config.gamma, target ? &*target : nullptr);
          optimizer.step(net, result.gradient);
          agent.series.losses.push_back(result.loss);
          ++updates;
          if (target && updates % config.target_sync == 0) *target = net;
        }
      }
      state = next;
    }
    agent.series.episode_rewards.push_back(total);
    epsilon = decay_epsilon(epsilon, config.schedule);
  }
  agent.final_epsilon = epsilon;
  agent.model = std::move(net);
  return agent;
}

}  // namespace spoilage::agents
