#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "spoilage/nnet/qnetwork.hpp"

namespace spoilage::nnet {

// Whitespace-separated text container:
//
//   qnetwork 1
//   topology <hybrid|lstm|rnn|ann>
//   layers <n>
//   lstm <input> <hidden> <current|previous>    (peephole source)
//   rnn <input> <hidden> <identity|tanh|relu>
//   dense <input> <output> <identity|tanh|relu>
//   <name> <rows> <cols> v...                   (one line per array)
//
// Each layer header is followed by its arrays in declaration order; values
// are column-major in shortest round-trip decimal form, so reading back a
// written network gives bitwise-identical parameters.

void write_qnetwork(std::ostream& out, const QNetworkParams& params);
QNetworkParams read_qnetwork(std::istream& in);

void save_qnetwork(const std::filesystem::path& path, const QNetworkParams& params);
QNetworkParams load_qnetwork(const std::filesystem::path& path);

// Shared by other text containers.
std::string activation_name(Activation activation);
Activation activation_from_name(const std::string& name);
Topology topology_from_name(const std::string& name);

}  // namespace spoilage::nnet
