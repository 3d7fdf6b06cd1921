#include "spoilage/nnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "spoilage/errors.hpp"

namespace spoilage::nnet {

namespace {

// The numeric side is evaluated by its own forward pass rather than by
// qnet_forward on a perturbed copy. Many single-entry perturbations run at
// once: perturbation k owns columns [k*B, (k+1)*B) of a widened batch and
// enters as an additive correction to one pre-activation row, which is exactly
// what changing that one weight does. Layers below the perturbed one are
// evaluated once and replicated.

struct Perturbation {
  std::size_t array = 0;  // index within the layer, declaration order
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double delta = 0.0;
};

struct Activations {
  bool is_sequence = true;
  Sequence seq;
  Matrix flat;
};

Matrix logistic(const Matrix& a) { return (1.0 + (-a.array()).exp()).inverse().matrix(); }

Matrix apply(const Matrix& pre, Activation act) {
  switch (act) {
    case Activation::Identity:
      return pre;
    case Activation::Tanh:
      return pre.array().tanh().matrix();
    case Activation::Relu:
      return pre.cwiseMax(0.0);
  }
  return pre;
}

Matrix replicate(const Matrix& m, std::size_t copies) {
  return m.replicate(1, static_cast<Eigen::Index>(copies));
}

Activations replicate(const Activations& a, std::size_t copies) {
  Activations out;
  out.is_sequence = a.is_sequence;
  if (a.is_sequence) {
    for (const auto& m : a.seq) out.seq.push_back(replicate(m, copies));
  } else {
    out.flat = replicate(a.flat, copies);
  }
  return out;
}

// Adds delta * source(row source_row, block k) to target row `row` of block k.
template <class Src>
void add_block(Matrix& target, Eigen::Index row, std::size_t k, Eigen::Index batch, double delta,
               const Src& source_row) {
  target.block(row, static_cast<Eigen::Index>(k) * batch, 1, batch) += delta * source_row;
}

void lstm_layer(const LstmParams& p, Activations& a, const std::vector<Perturbation>& perts,
                Eigen::Index batch) {
  const auto H = static_cast<Eigen::Index>(p.hidden_size());
  const auto cols = a.seq.front().cols();
  Matrix h = Matrix::Zero(H, cols);
  Matrix c = Matrix::Zero(H, cols);
  Sequence out;
  for (const auto& x : a.seq) {
    Matrix z = p.w_x * x + p.w_h * h;
    z.colwise() += p.b;
    for (Eigen::Index gate = 0; gate < 3; ++gate) {
      z.middleRows(gate * H, H).array() += c.array().colwise() * p.w_c.segment(gate * H, H).array();
    }
    for (std::size_t k = 0; k < perts.size(); ++k) {
      const auto& q = perts[k];
      const auto seg = [&](const Matrix& m, Eigen::Index r) {
        return m.block(r, static_cast<Eigen::Index>(k) * batch, 1, batch);
      };
      switch (q.array) {
        case 0:
          add_block(z, q.row, k, batch, q.delta, seg(x, q.col));
          break;
        case 1:
          add_block(z, q.row, k, batch, q.delta, seg(h, q.col));
          break;
        case 2:
          if (q.row < 3 * H) add_block(z, q.row, k, batch, q.delta, seg(c, q.row % H));
          break;
        default:
          z.block(q.row, static_cast<Eigen::Index>(k) * batch, 1, batch).array() += q.delta;
      }
    }
    const Matrix i = logistic(z.middleRows(0, H));
    const Matrix f = logistic(z.middleRows(H, H));
    const Matrix g = z.middleRows(2 * H, H).array().tanh().matrix();
    const Matrix c_new = (f.array() * c.array() + i.array() * g.array()).matrix();
    const Matrix& peep = p.output_peephole == OutputPeephole::CurrentCell ? c_new : c;
    Matrix zo = z.middleRows(3 * H, H);
    zo.array() += peep.array().colwise() * p.w_c.segment(3 * H, H).array();
    for (std::size_t k = 0; k < perts.size(); ++k) {
      const auto& q = perts[k];
      if (q.array == 2 && q.row >= 3 * H) {
        const auto r = q.row - 3 * H;
        add_block(zo, r, k, batch, q.delta,
                  peep.block(r, static_cast<Eigen::Index>(k) * batch, 1, batch));
      }
    }
    const Matrix o = logistic(zo);
    h = (o.array() * c_new.array().tanh()).matrix();
    c = c_new;
    out.push_back(h);
  }
  a.seq = std::move(out);
}

void rnn_layer(const RnnParams& p, Activations& a, const std::vector<Perturbation>& perts,
               Eigen::Index batch) {
  const auto H = static_cast<Eigen::Index>(p.hidden_size());
  Matrix h = Matrix::Zero(H, a.seq.front().cols());
  Sequence out;
  for (const auto& x : a.seq) {
    Matrix z = p.w_x * x + p.w_h * h;
    z.colwise() += p.b;
    for (std::size_t k = 0; k < perts.size(); ++k) {
      const auto& q = perts[k];
      const auto col0 = static_cast<Eigen::Index>(k) * batch;
      if (q.array == 0) add_block(z, q.row, k, batch, q.delta, x.block(q.col, col0, 1, batch));
      else if (q.array == 1) add_block(z, q.row, k, batch, q.delta, h.block(q.col, col0, 1, batch));
      else z.block(q.row, col0, 1, batch).array() += q.delta;
    }
    h = apply(z, p.activation);
    out.push_back(h);
  }
  a.seq = std::move(out);
}

void dense_layer(const DenseParams& p, Activations& a, const std::vector<Perturbation>& perts,
                 Eigen::Index batch) {
  if (a.is_sequence) {
    a.flat = a.seq.back();
    a.seq.clear();
    a.is_sequence = false;
  }
  Matrix z = p.w * a.flat;
  z.colwise() += p.b;
  for (std::size_t k = 0; k < perts.size(); ++k) {
    const auto& q = perts[k];
    const auto col0 = static_cast<Eigen::Index>(k) * batch;
    if (q.array == 0) add_block(z, q.row, k, batch, q.delta, a.flat.block(q.col, col0, 1, batch));
    else z.block(q.row, col0, 1, batch).array() += q.delta;
  }
  a.flat = apply(z, p.activation);
}

void run_layer(const Layer& layer, Activations& a, const std::vector<Perturbation>& perts,
               Eigen::Index batch) {
  if (const auto* l = std::get_if<LstmParams>(&layer)) lstm_layer(*l, a, perts, batch);
  else if (const auto* r = std::get_if<RnnParams>(&layer)) rnn_layer(*r, a, perts, batch);
  else dense_layer(std::get<DenseParams>(layer), a, perts, batch);
}

Activations network_input(const QNetworkParams& params, const Sequence& inputs) {
  Activations a;
  a.is_sequence = !std::holds_alternative<DenseParams>(params.layers.front());
  if (a.is_sequence) {
    a.seq = inputs;
  } else {
    const auto f = inputs.front().rows();
    a.flat.resize(f * static_cast<Eigen::Index>(inputs.size()), inputs.front().cols());
    for (std::size_t t = 0; t < inputs.size(); ++t) {
      a.flat.middleRows(static_cast<Eigen::Index>(t) * f, f) = inputs[t];
    }
  }
  return a;
}

std::vector<double> block_losses(const Matrix& q, const RegressionBatch& batch, std::size_t blocks) {
  const auto b_size = static_cast<Eigen::Index>(batch.size());
  std::vector<double> losses(blocks, 0.0);
  for (std::size_t k = 0; k < blocks; ++k) {
    double sum = 0.0;
    for (Eigen::Index b = 0; b < b_size; ++b) {
      const double r = q(batch.actions[static_cast<std::size_t>(b)], static_cast<Eigen::Index>(k) * b_size + b) -
                       batch.targets[static_cast<std::size_t>(b)];
      sum += r * r;
    }
    losses[k] = sum / static_cast<double>(b_size);
  }
  return losses;
}

struct ArrayShape {
  Eigen::Index rows = 0;
  Eigen::Index size = 0;
};

std::vector<ArrayShape> array_shapes(const Layer& layer) {
  std::vector<ArrayShape> s;
  const auto add = [&](const auto& m) { s.push_back({m.rows(), m.size()}); };
  if (const auto* l = std::get_if<LstmParams>(&layer)) {
    add(l->w_x), add(l->w_h), add(l->w_c), add(l->b);
  } else if (const auto* r = std::get_if<RnnParams>(&layer)) {
    add(r->w_x), add(r->w_h), add(r->b);
  } else {
    const auto& d = std::get<DenseParams>(layer);
    add(d.w), add(d.b);
  }
  return s;
}

// Central-difference gradient of every parameter, in spans() order.
std::vector<double> numeric_gradient(const QNetworkParams& params, const RegressionBatch& batch,
                                     double eps) {
  const auto b_size = static_cast<Eigen::Index>(batch.size());
  const std::size_t pairs_per_pass = std::max<std::size_t>(1, 128 / batch.size());
  std::vector<double> grad;
  grad.reserve(params.parameter_count());

  Activations below = network_input(params, batch.inputs);
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    std::vector<Perturbation> entries;
    const auto shapes = array_shapes(params.layers[l]);
    for (std::size_t arr = 0; arr < shapes.size(); ++arr) {
      for (Eigen::Index e = 0; e < shapes[arr].size; ++e) {
        entries.push_back({arr, e % shapes[arr].rows, e / shapes[arr].rows, eps});
      }
    }
    for (std::size_t start = 0; start < entries.size(); start += pairs_per_pass) {
      const std::size_t n = std::min(pairs_per_pass, entries.size() - start);
      std::vector<Perturbation> perts;
      perts.reserve(2 * n);
      for (std::size_t k = 0; k < n; ++k) {
        Perturbation plus = entries[start + k];
        Perturbation minus = plus;
        minus.delta = -eps;
        perts.push_back(plus);
        perts.push_back(minus);
      }
      Activations a = replicate(below, perts.size());
      run_layer(params.layers[l], a, perts, b_size);
      for (std::size_t above = l + 1; above < params.layers.size(); ++above) {
        run_layer(params.layers[above], a, {}, b_size);
      }
      const auto losses = block_losses(a.flat, batch, perts.size());
      for (std::size_t k = 0; k < n; ++k) {
        grad.push_back((losses[2 * k] - losses[2 * k + 1]) / (2.0 * eps));
      }
    }
    run_layer(params.layers[l], below, {}, b_size);
  }
  return grad;
}

void check_inputs(const QNetworkParams& params, const RegressionBatch& batch, double eps) {
  if (!(eps >= 1e-6 && eps <= 1e-4)) throw InvalidConfig("finite-difference epsilon must lie in [1e-6, 1e-4]");
  if (params.layers.empty()) throw ShapeMismatch("network has no layers");
  if (batch.size() == 0) throw EmptyBatch();
  if (batch.targets.size() != batch.size()) throw ShapeMismatch("targets differ in length from actions");
}

}  // namespace

GradCheckResult grad_check(const QNetworkParams& params, const RegressionBatch& batch,
                           const QNetworkParams& analytic, double fd_epsilon) {
  check_inputs(params, batch, fd_epsilon);
  if (!params.same_shape(analytic)) throw ShapeMismatch("analytic gradient does not match parameters");
  const std::vector<double> numeric = numeric_gradient(params, batch, fd_epsilon);

  GradCheckResult result;
  std::size_t j = 0;
  for (const auto& s : analytic.spans()) {
    for (double a : s) {
      const double n = numeric[j];
      const double err = std::abs(a - n) / std::max({1.0, std::abs(a), std::abs(n)});
      if (err > result.max_relative_error || !std::isfinite(err)) {
        result.max_relative_error = std::isfinite(err) ? err : HUGE_VAL;
        result.worst_index = j;
        result.worst_analytic = a;
        result.worst_numeric = n;
      }
      ++j;
    }
  }
  result.checked = j;
  return result;
}

GradCheckResult grad_check(const QNetworkParams& params, const RegressionBatch& batch,
                           double fd_epsilon) {
  check_inputs(params, batch, fd_epsilon);
  return grad_check(params, batch, regression_loss(params, batch).gradient, fd_epsilon);
}

GradCheckResult grad_check_td(const QNetworkParams& params, const TdBatch& batch, double gamma,
                              double fd_epsilon) {
  return grad_check(params, freeze_td_targets(params, batch, gamma), fd_epsilon);
}

GradCheckCase random_grad_check_case(Topology topology, const NetworkShape& shape, std::size_t batch,
                                     std::uint64_t seed) {
  if (batch == 0) throw EmptyBatch();
  Rng init(derive_seed(seed, 1));
  Rng data(derive_seed(seed, 2));
  GradCheckCase c{make_qnetwork(topology, shape, init), {}};
  const auto cols = static_cast<Eigen::Index>(batch);
  for (std::size_t t = 0; t < shape.sequence_length; ++t) {
    Matrix x(static_cast<Eigen::Index>(shape.input_features), cols);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = data.uniform();
    c.batch.inputs.push_back(std::move(x));
  }
  for (std::size_t b = 0; b < batch; ++b) {
    c.batch.actions.push_back(static_cast<int>(data.uniform_index(kQOutputs)));
    c.batch.targets.push_back(data.uniform(-1.0, 1.0));
  }
  return c;
}

}  // namespace spoilage::nnet
