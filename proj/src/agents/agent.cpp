#include "spoilage/agents/agent.hpp"

#include <algorithm>
#include <cmath>

#include "spoilage/errors.hpp"

namespace spoilage::agents {

std::string_view agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::Hybrid:
      return "hybrid";
    case AgentKind::LstmOnly:
      return "lstm";
    case AgentKind::RnnOnly:
      return "rnn";
    case AgentKind::Ann:
      return "ann";
    case AgentKind::MonteCarlo:
      return "mc";
  }
  return "unknown";
}

std::string_view agent_display_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::Hybrid:
      return "LSTM+RNN";
    case AgentKind::LstmOnly:
      return "LSTM";
    case AgentKind::RnnOnly:
      return "RNN";
    case AgentKind::Ann:
      return "ANN";
    case AgentKind::MonteCarlo:
      return "Monte Carlo";
  }
  return "unknown";
}

std::optional<AgentKind> agent_kind_from_name(std::string_view name) {
  for (AgentKind k : kAllAgentKinds) {
    if (name == agent_kind_name(k)) return k;
  }
  return std::nullopt;
}

nnet::Topology topology_for(AgentKind kind) {
  switch (kind) {
    case AgentKind::Hybrid:
      return nnet::Topology::Hybrid;
    case AgentKind::LstmOnly:
      return nnet::Topology::LstmOnly;
    case AgentKind::RnnOnly:
      return nnet::Topology::RnnOnly;
    case AgentKind::Ann:
      return nnet::Topology::Ann;
    case AgentKind::MonteCarlo:
      break;
  }
  throw InvalidConfig("the Monte Carlo agent has no network topology");
}

std::uint64_t TabularQ::key(const Observation& obs) const {
  std::uint64_t k = 0;
  std::uint64_t place = 1;
  for (double x : obs) {
    const double scaled = std::clamp(x, 0.0, 1.0) * static_cast<double>(bins);
    const auto cell = std::min<std::uint64_t>(bins - 1, static_cast<std::uint64_t>(scaled));
    k += cell * place;
    place *= bins;
  }
  return k;
}

std::array<double, kActionCount> TabularQ::values(const Observation& obs) const {
  const auto it = table.find(key(obs));
  return it == table.end() ? std::array<double, kActionCount>{} : it->second.q;
}

void TabularQ::record_return(const Observation& obs, SpoilageLevel action, double ret) {
  Entry& e = table[key(obs)];
  const auto a = static_cast<std::size_t>(code(action));
  ++e.visits[a];
  e.q[a] += (ret - e.q[a]) / static_cast<double>(e.visits[a]);
}

std::vector<std::array<double, kActionCount>> TrainedAgent::q_values(
    const std::vector<Observation>& observations) const {
  std::vector<std::array<double, kActionCount>> out;
  out.reserve(observations.size());
  if (const auto* tab = std::get_if<TabularQ>(&model)) {
    for (const auto& obs : observations) out.push_back(tab->values(obs));
    return out;
  }
  const auto& net = std::get<nnet::QNetworkParams>(model);
  const auto encodings = encode_pass(layout, observations);
  constexpr std::size_t kChunk = 1024;
  for (std::size_t start = 0; start < encodings.size(); start += kChunk) {
    const std::size_t n = std::min(kChunk, encodings.size() - start);
    nnet::Matrix cols(static_cast<Eigen::Index>(layout.width()), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = encodings[start + j];
      std::copy(e.begin(), e.end(), cols.col(static_cast<Eigen::Index>(j)).data());
    }
    const nnet::Matrix q = nnet::qnet_forward(net, to_sequence(layout, cols));
    for (std::size_t j = 0; j < n; ++j) {
      std::array<double, kActionCount> row{};
      for (std::size_t a = 0; a < kActionCount; ++a) {
        row[a] = q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j));
      }
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace spoilage::agents
