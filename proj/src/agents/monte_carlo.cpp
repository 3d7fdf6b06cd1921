#include "spoilage/agents/monte_carlo.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "spoilage/env.hpp"
#include "spoilage/errors.hpp"

namespace spoilage::agents {

void McConfig::validate() const {
  if (bins < 2 || bins > 1000) throw InvalidConfig("bins must lie in [2, 1000]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidConfig("gamma must lie in [0, 1)");
  if (episodes == 0) throw InvalidConfig("episodes must be >= 1");
  if (max_steps && *max_steps == 0) throw InvalidConfig("max steps must be >= 1");
  schedule.validate();
}

double return_bound(double gamma, std::size_t horizon) {
  if (gamma == 1.0) return static_cast<double>(horizon);
  return (1.0 - std::pow(gamma, static_cast<double>(horizon))) / (1.0 - gamma);
}

TrainedAgent train_monte_carlo(const LabeledDataset& dataset, const McConfig& config) {
  config.validate();
  TrainedAgent agent;
  agent.kind = AgentKind::MonteCarlo;
  agent.ranges = config.ranges.value_or(default_ranges(dataset));
  agent.schedule = config.schedule;

  TabularQ q;
  q.bins = config.bins;
  Rng rng(derive_seed(config.seed, 2));
  SpoilageEnv env(dataset, agent.ranges, ShapingConfig{}, config.max_steps);

  struct Visit {
    Observation obs;
    SpoilageLevel action;
    double reward;
  };
  std::vector<Visit> episode_log;
  std::vector<double> returns;
  double epsilon = config.schedule.initial;
  for (std::size_t episode = 0; episode < config.episodes; ++episode) {
    agent.series.epsilons.push_back(epsilon);
    episode_log.clear();
    Observation obs = env.reset();
    double total = 0.0;
    while (!env.done()) {
      const SpoilageLevel action = select_action_lazy([&] { return q.values(obs); }, epsilon, rng);
      const StepResult step = env.step(action);
      episode_log.push_back({obs, action, step.reward});
      total += step.reward;
      obs = step.observation;
    }

    returns.assign(episode_log.size(), 0.0);
    double g = 0.0;
    for (std::size_t t = episode_log.size(); t-- > 0;) {
      g = episode_log[t].reward + config.gamma * g;
      returns[t] = g;
    }
    std::set<std::pair<std::uint64_t, int>> seen;
    for (std::size_t t = 0; t < episode_log.size(); ++t) {
      const auto& v = episode_log[t];
      if (config.first_visit && !seen.emplace(q.key(v.obs), code(v.action)).second) continue;
      q.record_return(v.obs, v.action, returns[t]);
    }

    agent.series.episode_rewards.push_back(total);
    epsilon = decay_epsilon(epsilon, config.schedule);
  }
  agent.final_epsilon = epsilon;
  agent.model = std::move(q);
  return agent;
}

}  // namespace spoilage::agents
