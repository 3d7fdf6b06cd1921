#include "spoilage/nnet/qnetwork.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "spoilage/errors.hpp"

namespace spoilage::nnet {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Calls fn on each parameter array of a layer in declaration order.
template <class L, class Fn>
void visit_arrays(L& layer, Fn&& fn) {
  std::visit(
      [&](auto& l) {
        using T = std::remove_cvref_t<decltype(l)>;
        if constexpr (std::is_same_v<T, LstmParams>) {
          fn(l.w_x);
          fn(l.w_h);
          fn(l.w_c);
          fn(l.b);
        } else if constexpr (std::is_same_v<T, RnnParams>) {
          fn(l.w_x);
          fn(l.w_h);
          fn(l.b);
        } else {
          fn(l.w);
          fn(l.b);
        }
      },
      layer);
}

Matrix flatten(const Sequence& input) {
  const auto features = input.front().rows();
  Matrix flat(features * static_cast<Eigen::Index>(input.size()), input.front().cols());
  for (std::size_t t = 0; t < input.size(); ++t) {
    flat.middleRows(static_cast<Eigen::Index>(t) * features, features) = input[t];
  }
  return flat;
}

void fill_uniform(Eigen::Ref<Matrix> m, double bound, Rng& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-bound, bound);
  }
}

void check_finite(const Matrix& m, const char* where) {
  if (!m.allFinite()) throw NonFiniteValue(where);
}

}  // namespace

std::string_view topology_name(Topology topology) {
  switch (topology) {
    case Topology::Hybrid:
      return "hybrid";
    case Topology::LstmOnly:
      return "lstm";
    case Topology::RnnOnly:
      return "rnn";
    case Topology::Ann:
      return "ann";
  }
  return "unknown";
}

std::vector<std::span<double>> QNetworkParams::spans() {
  std::vector<std::span<double>> out;
  for (auto& layer : layers) {
    visit_arrays(layer, [&](auto& a) {
      out.emplace_back(a.data(), static_cast<std::size_t>(a.size()));
    });
  }
  return out;
}

std::vector<std::span<const double>> QNetworkParams::spans() const {
  std::vector<std::span<const double>> out;
  for (const auto& layer : layers) {
    visit_arrays(layer, [&](const auto& a) {
      out.emplace_back(a.data(), static_cast<std::size_t>(a.size()));
    });
  }
  return out;
}

std::size_t QNetworkParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& s : spans()) n += s.size();
  return n;
}

QNetworkParams QNetworkParams::zeros_like() const {
  QNetworkParams z = *this;
  for (auto& layer : z.layers) visit_arrays(layer, [](auto& a) { a.setZero(); });
  return z;
}

bool QNetworkParams::same_shape(const QNetworkParams& other) const {
  if (topology != other.topology || layers.size() != other.layers.size()) return false;
  const auto a = spans();
  const auto b = other.spans();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].index() != other.layers[i].index()) return false;
  }
  return true;
}

QNetworkParams make_zero_qnetwork(Topology topology, const NetworkShape& shape) {
  if (shape.input_features == 0 || shape.sequence_length == 0 || shape.hidden == 0) {
    throw ShapeMismatch("network dimensions must be positive");
  }
  const std::size_t in = shape.input_features;
  const std::size_t h = shape.hidden;
  QNetworkParams net;
  net.topology = topology;
  auto lstm = [&](std::size_t input) {
    LstmParams p = LstmParams::zeros(input, h);
    p.output_peephole = shape.output_peephole;
    return p;
  };
  switch (topology) {
    case Topology::Hybrid:
      net.layers.emplace_back(lstm(in));
      net.layers.emplace_back(RnnParams::zeros(h, h, shape.rnn_activation));
      break;
    case Topology::LstmOnly:
      net.layers.emplace_back(lstm(in));
      break;
    case Topology::RnnOnly:
      net.layers.emplace_back(RnnParams::zeros(in, h, shape.rnn_activation));
      break;
    case Topology::Ann:
      net.layers.emplace_back(DenseParams::zeros(in * shape.sequence_length, h, Activation::Relu));
      net.layers.emplace_back(DenseParams::zeros(h, h, Activation::Relu));
      break;
  }
  net.layers.emplace_back(DenseParams::zeros(h, kQOutputs, Activation::Identity));
  return net;
}

QNetworkParams make_qnetwork(Topology topology, const NetworkShape& shape, Rng& rng) {
  QNetworkParams net = make_zero_qnetwork(topology, shape);
  for (auto& layer : net.layers) {
    std::size_t fan_in = 0;
    std::visit(Overloaded{
                   [&](LstmParams& l) { fan_in = l.input_size() + l.hidden_size(); },
                   [&](RnnParams& l) { fan_in = l.input_size() + l.hidden_size(); },
                   [&](DenseParams& l) { fan_in = l.input_size(); },
               },
               layer);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    visit_arrays(layer, [&](auto& a) { fill_uniform(a, bound, rng); });
  }
  return net;
}

Matrix qnet_forward(const QNetworkParams& params, const Sequence& input, ForwardCache* cache) {
  if (params.layers.empty()) throw ShapeMismatch("network has no layers");
  if (input.empty()) throw ShapeMismatch("empty input sequence");
  const auto batch = input.front().cols();
  for (const auto& x : input) {
    if (x.rows() != input.front().rows() || x.cols() != batch || batch == 0) {
      throw ShapeMismatch("input sequence steps differ in shape");
    }
  }
  if (cache) {
    cache->layers.clear();
    cache->sequence_length = input.size();
    cache->input_features = static_cast<std::size_t>(input.front().rows());
    cache->batch = batch;
  }

  // Exactly one of these holds the running activation.
  Sequence seq;
  Matrix flat;
  bool is_sequence = !std::holds_alternative<DenseParams>(params.layers.front());
  if (is_sequence) seq = input;
  else flat = flatten(input);

  for (const auto& layer : params.layers) {
    if (const auto* lstm = std::get_if<LstmParams>(&layer)) {
      if (!is_sequence) throw ShapeMismatch("recurrent layer after a dense layer");
      const auto h = static_cast<Eigen::Index>(lstm->hidden_size());
      const Matrix zero = Matrix::Zero(h, batch);
      if (cache) {
        LstmCache lc;
        seq = lstm_forward(*lstm, seq, zero, zero, &lc).hidden;
        cache->layers.emplace_back(std::move(lc));
      } else {
        seq = lstm_forward(*lstm, seq, zero, zero).hidden;
      }
    } else if (const auto* rnn = std::get_if<RnnParams>(&layer)) {
      if (!is_sequence) throw ShapeMismatch("recurrent layer after a dense layer");
      const Matrix zero = Matrix::Zero(static_cast<Eigen::Index>(rnn->hidden_size()), batch);
      if (cache) {
        RnnCache rc;
        seq = rnn_forward(*rnn, seq, zero, &rc);
        cache->layers.emplace_back(std::move(rc));
      } else {
        seq = rnn_forward(*rnn, seq, zero);
      }
    } else {
      const auto& dense = std::get<DenseParams>(layer);
      if (is_sequence) {
        flat = std::move(seq.back());
        seq.clear();
        is_sequence = false;
      }
      if (cache) {
        DenseCache dc;
        flat = dense_forward(dense, flat, &dc);
        cache->layers.emplace_back(std::move(dc));
      } else {
        flat = dense_forward(dense, flat);
      }
    }
  }
  if (is_sequence) throw ShapeMismatch("network must end in a dense head");
  if (flat.rows() != static_cast<Eigen::Index>(kQOutputs)) {
    throw ShapeMismatch("network output width must be 4");
  }
  check_finite(flat, "qnet_forward");
  return flat;
}

QNetworkParams backward(const QNetworkParams& params, const ForwardCache& cache,
                        const Matrix& output_grad) {
  if (cache.empty() || cache.layers.size() != params.layers.size()) throw MissingCache();
  if (output_grad.rows() != static_cast<Eigen::Index>(kQOutputs) || output_grad.cols() != cache.batch) {
    throw ShapeMismatch("output gradient must be 4 x batch");
  }
  QNetworkParams grad = params.zeros_like();

  Matrix d_flat = output_grad;
  Sequence d_seq;
  bool grad_is_sequence = false;
  for (std::size_t k = params.layers.size(); k-- > 0;) {
    const Layer& layer = params.layers[k];
    const LayerCache& lc = cache.layers[k];
    if (const auto* dense = std::get_if<DenseParams>(&layer)) {
      const auto* dcache = std::get_if<DenseCache>(&lc);
      if (!dcache) throw MissingCache();
      d_flat = dense_backward(*dense, *dcache, d_flat, std::get<DenseParams>(grad.layers[k]));
      continue;
    }
    if (!grad_is_sequence) {
      // Dense head read only the last step of this recurrent layer.
      d_seq.assign(cache.sequence_length, Matrix::Zero(d_flat.rows(), cache.batch));
      d_seq.back() = d_flat;
      grad_is_sequence = true;
    }
    if (const auto* lstm = std::get_if<LstmParams>(&layer)) {
      const auto* c = std::get_if<LstmCache>(&lc);
      if (!c) throw MissingCache();
      d_seq = lstm_backward(*lstm, *c, d_seq, std::get<LstmParams>(grad.layers[k]));
    } else {
      const auto* c = std::get_if<RnnCache>(&lc);
      if (!c) throw MissingCache();
      d_seq = rnn_backward(std::get<RnnParams>(layer), *c, d_seq, std::get<RnnParams>(grad.layers[k]));
    }
  }
  for (const auto& s : grad.spans()) {
    for (double v : s) {
      if (!std::isfinite(v)) throw NonFiniteValue("backward");
    }
  }
  return grad;
}

}  // namespace spoilage::nnet
