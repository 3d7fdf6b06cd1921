#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "spoilage/nnet/layers.hpp"
#include "spoilage/random.hpp"

namespace spoilage::nnet {

inline constexpr std::size_t kQOutputs = 4;

enum class Topology { Hybrid, LstmOnly, RnnOnly, Ann };

std::string_view topology_name(Topology topology);

using Layer = std::variant<LstmParams, RnnParams, DenseParams>;

/// Ordered layer stack ending in a width-4 linear head.
///   Hybrid:   LSTM(H) -> RNN(H) -> Dense(4)
///   LstmOnly: LSTM(H) -> Dense(4)
///   RnnOnly:  RNN(H) -> Dense(4)
///   Ann:      Dense(H, relu) -> Dense(H, relu) -> Dense(4)
/// Recurrent layers start from zero state on every call and the final step
/// of the last recurrent layer feeds the dense head. A stack that starts with
/// a dense layer sees the input sequence flattened time-major into one column
/// per sample.
struct QNetworkParams {
  Topology topology = Topology::Hybrid;
  std::vector<Layer> layers;

  /// Views over every parameter array in a fixed order (layer by layer; within
  /// a layer as declared). Gradient and optimizer buffers share the order.
  std::vector<std::span<double>> spans();
  std::vector<std::span<const double>> spans() const;

  std::size_t parameter_count() const;
  QNetworkParams zeros_like() const;
  bool same_shape(const QNetworkParams& other) const;
};

struct NetworkShape {
  std::size_t input_features = 1;  // features per time step
  std::size_t sequence_length = 5;
  std::size_t hidden = 64;
  Activation rnn_activation = Activation::Tanh;
  OutputPeephole output_peephole = OutputPeephole::CurrentCell;
};

/// Weights and biases uniform in +/- 1/sqrt(fan_in), where fan_in is the
/// total input width feeding the layer (input + hidden for recurrent layers).
QNetworkParams make_qnetwork(Topology topology, const NetworkShape& shape, Rng& rng);
QNetworkParams make_zero_qnetwork(Topology topology, const NetworkShape& shape);

using LayerCache = std::variant<LstmCache, RnnCache, DenseCache>;

struct ForwardCache {
  std::vector<LayerCache> layers;
  std::size_t sequence_length = 0;
  std::size_t input_features = 0;
  long batch = 0;

  bool empty() const { return layers.empty(); }
};

/// Q-values, 4 x batch.
Matrix qnet_forward(const QNetworkParams& params, const Sequence& input,
                    ForwardCache* cache = nullptr);

/// Gradient of a scalar loss with respect to every parameter given
/// dLoss/dQ (4 x batch); contributions are summed over the batch.
QNetworkParams backward(const QNetworkParams& params, const ForwardCache& cache,
                        const Matrix& output_grad);

}  // namespace spoilage::nnet
