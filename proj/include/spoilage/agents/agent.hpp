#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spoilage/agents/encoding.hpp"
#include "spoilage/agents/policy.hpp"
#include "spoilage/domain.hpp"
#include "spoilage/nnet/qnetwork.hpp"

namespace spoilage::agents {

enum class AgentKind { Hybrid, LstmOnly, RnnOnly, Ann, MonteCarlo };

inline constexpr std::array<AgentKind, 5> kAllAgentKinds = {
    AgentKind::Hybrid, AgentKind::Ann, AgentKind::LstmOnly, AgentKind::RnnOnly, AgentKind::MonteCarlo};

/// CLI spelling: hybrid, lstm, rnn, ann, mc.
std::string_view agent_kind_name(AgentKind kind);
/// Row label used in comparison tables: "LSTM+RNN", "ANN", "LSTM", "RNN", "Monte Carlo".
std::string_view agent_display_name(AgentKind kind);
std::optional<AgentKind> agent_kind_from_name(std::string_view name);
nnet::Topology topology_for(AgentKind kind);

/// Tabular action values over binned observations. Each normalized feature
/// is cut into `bins` equal cells; the key packs the five cell indices in
/// base `bins`, feature 0 least significant. Unvisited entries read as 0.
struct TabularQ {
  struct Entry {
    std::array<double, kActionCount> q{};
    std::array<std::uint64_t, kActionCount> visits{};
  };

  std::size_t bins = 10;
  std::map<std::uint64_t, Entry> table;

  std::uint64_t key(const Observation& obs) const;
  std::array<double, kActionCount> values(const Observation& obs) const;
  /// Running-mean update of one (state, action) pair.
  void record_return(const Observation& obs, SpoilageLevel action, double ret);
};

struct TrainingSeries {
  std::vector<double> episode_rewards;  // per-episode reward totals
  std::vector<double> losses;           // per update
  std::vector<double> epsilons;         // epsilon in effect during each episode
};

struct TrainedAgent {
  AgentKind kind = AgentKind::Hybrid;
  std::variant<nnet::QNetworkParams, TabularQ> model;
  InputLayout layout;
  NormalizationRanges ranges{{}};
  EpsilonSchedule schedule;
  TrainingSeries series;
  double final_epsilon = 1.0;

  /// Greedy action values for each row of a pass over `observations`.
  std::vector<std::array<double, kActionCount>> q_values(const std::vector<Observation>& observations) const;
};

}  // namespace spoilage::agents
