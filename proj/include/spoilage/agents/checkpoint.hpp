#pragma once

#include <filesystem>
#include <iosfwd>

#include "spoilage/agents/agent.hpp"

namespace spoilage::agents {

// Text container for a trained agent:
//
//   agent 1
//   kind <hybrid|lstm|rnn|ann|mc>
//   layout <scalars|window:W>
//   ranges <min max> x 5
//   schedule <initial> <decay> <floor>
//   final_epsilon <value>
//   model qnetwork            followed by the network container, or
//   model tabular <bins> <n>  followed by n lines: key q0..q3 visits0..visits3
//
// Training series are not stored here. Values use shortest round-trip
// decimals, so a reloaded agent acts identically.

void write_agent(std::ostream& out, const TrainedAgent& agent);
TrainedAgent read_agent(std::istream& in);

void save_agent(const std::filesystem::path& path, const TrainedAgent& agent);
TrainedAgent load_agent(const std::filesystem::path& path);

}  // namespace spoilage::agents
