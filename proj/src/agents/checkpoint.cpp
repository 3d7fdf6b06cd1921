#include "spoilage/agents/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "spoilage/errors.hpp"
#include "spoilage/nnet/checkpoint.hpp"
#include "spoilage/text.hpp"

namespace spoilage::agents {

namespace {

std::string word(std::istream& in, const char* what) {
  std::string t;
  if (!(in >> t)) throw CorruptCheckpoint(std::string("truncated before ") + what);
  return t;
}

void expect(std::istream& in, const char* w) {
  const std::string t = word(in, w);
  if (t != w) throw CorruptCheckpoint(std::string("expected '") + w + "', found '" + t + "'");
}

double real(std::istream& in, const char* what) {
  const std::string t = word(in, what);
  const auto v = parse_double(t);
  if (!v) throw CorruptCheckpoint(std::string("bad ") + what + " '" + t + "'");
  return *v;
}

std::uint64_t count(std::istream& in, const char* what) {
  const std::string t = word(in, what);
  const auto v = parse_integer(t);
  if (!v || *v < 0) throw CorruptCheckpoint(std::string("bad ") + what + " '" + t + "'");
  return static_cast<std::uint64_t>(*v);
}

}  // namespace

void write_agent(std::ostream& out, const TrainedAgent& agent) {
  out << "agent 1\n";
  out << "kind " << agent_kind_name(agent.kind) << '\n';
  out << "layout " << agent.layout.name() << '\n';
  out << "ranges";
  for (const auto& r : agent.ranges.ranges()) out << ' ' << format_exact(r.min) << ' ' << format_exact(r.max);
  out << '\n';
  out << "schedule " << format_exact(agent.schedule.initial) << ' ' << format_exact(agent.schedule.decay) << ' '
      << format_exact(agent.schedule.floor) << '\n';
  out << "final_epsilon " << format_exact(agent.final_epsilon) << '\n';
  if (const auto* tab = std::get_if<TabularQ>(&agent.model)) {
    out << "model tabular " << tab->bins << ' ' << tab->table.size() << '\n';
    for (const auto& [key, entry] : tab->table) {
      out << key;
      for (double q : entry.q) out << ' ' << format_exact(q);
      for (auto n : entry.visits) out << ' ' << n;
      out << '\n';
    }
  } else {
    out << "model qnetwork\n";
    nnet::write_qnetwork(out, std::get<nnet::QNetworkParams>(agent.model));
  }
}

TrainedAgent read_agent(std::istream& in) {
  expect(in, "agent");
  if (count(in, "version") != 1) throw CorruptCheckpoint("unsupported agent version");
  TrainedAgent agent;
  expect(in, "kind");
  const std::string kind = word(in, "kind");
  const auto k = agent_kind_from_name(kind);
  if (!k) throw CorruptCheckpoint("unknown agent kind '" + kind + "'");
  agent.kind = *k;

  expect(in, "layout");
  try {
    agent.layout = InputLayout::parse(word(in, "layout"));
  } catch (const InvalidConfig& e) {
    throw CorruptCheckpoint(e.what());
  }

  expect(in, "ranges");
  std::array<Range, kFeatureCount> ranges{};
  for (auto& r : ranges) {
    r.min = real(in, "range");
    r.max = real(in, "range");
  }
  try {
    agent.ranges = NormalizationRanges(ranges);
  } catch (const InvalidConfig& e) {
    throw CorruptCheckpoint(e.what());
  }

  expect(in, "schedule");
  agent.schedule.initial = real(in, "epsilon");
  agent.schedule.decay = real(in, "decay");
  agent.schedule.floor = real(in, "floor");
  expect(in, "final_epsilon");
  agent.final_epsilon = real(in, "final epsilon");

  expect(in, "model");
  const std::string model = word(in, "model kind");
  if (model == "tabular") {
    if (agent.kind != AgentKind::MonteCarlo) throw CorruptCheckpoint("tabular model for a network agent");
    TabularQ tab;
    tab.bins = count(in, "bins");
    if (tab.bins < 2) throw CorruptCheckpoint("bins must be >= 2");
    const auto entries = count(in, "entry count");
    for (std::uint64_t e = 0; e < entries; ++e) {
      const auto key = count(in, "key");
      TabularQ::Entry entry;
      for (auto& q : entry.q) q = real(in, "q value");
      for (auto& n : entry.visits) n = count(in, "visit count");
      tab.table.emplace(key, entry);
    }
    agent.model = std::move(tab);
  } else if (model == "qnetwork") {
    if (agent.kind == AgentKind::MonteCarlo) throw CorruptCheckpoint("network model for the Monte Carlo agent");
    auto net = nnet::read_qnetwork(in);
    if (net.topology != topology_for(agent.kind)) throw CorruptCheckpoint("topology does not match agent kind");
    agent.model = std::move(net);
  } else {
    throw CorruptCheckpoint("unknown model kind '" + model + "'");
  }
  return agent;
}

void save_agent(const std::filesystem::path& path, const TrainedAgent& agent) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_agent(out, agent);
  if (!out) throw DataError("failed writing " + path.string());
}

TrainedAgent load_agent(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return read_agent(in);
}

}  // namespace spoilage::agents
