#include "spoilage/nnet/layers.hpp"

#include <string>

#include "spoilage/errors.hpp"

namespace spoilage::nnet {

namespace {

// Both nonlinearities go through the vectorized exp; Eigen has no packet
// tanh for doubles.
template <class E>
Matrix sigmoid_of(const Eigen::ArrayBase<E>& a) {
  return (1.0 + (-a).exp()).inverse().matrix();
}

template <class E>
Matrix tanh_of(const Eigen::ArrayBase<E>& a) {
  return (2.0 * (1.0 + (-2.0 * a).exp()).inverse() - 1.0).matrix();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeMismatch(what);
}

void check_sequence(const Sequence& input, std::size_t features, const char* layer) {
  require(!input.empty(), std::string(layer) + ": empty input sequence");
  const auto batch = input.front().cols();
  for (const auto& x : input) {
    require(static_cast<std::size_t>(x.rows()) == features && x.cols() == batch && batch > 0,
            std::string(layer) + ": input step has shape " + std::to_string(x.rows()) + "x" +
                std::to_string(x.cols()) + ", expected " + std::to_string(features) + " rows");
  }
}

}  // namespace

Matrix activate(const Matrix& pre, Activation activation) {
  switch (activation) {
    case Activation::Identity:
      return pre;
    case Activation::Tanh:
      return tanh_of(pre.array());
    case Activation::Relu:
      return pre.cwiseMax(0.0);
  }
  return pre;
}

LstmParams LstmParams::zeros(std::size_t input, std::size_t hidden) {
  const auto h4 = static_cast<Eigen::Index>(4 * hidden);
  LstmParams p;
  p.w_x = Matrix::Zero(h4, static_cast<Eigen::Index>(input));
  p.w_h = Matrix::Zero(h4, static_cast<Eigen::Index>(hidden));
  p.w_c = Vector::Zero(h4);
  p.b = Vector::Zero(h4);
  return p;
}

RnnParams RnnParams::zeros(std::size_t input, std::size_t hidden, Activation activation) {
  const auto h = static_cast<Eigen::Index>(hidden);
  RnnParams p;
  p.w_x = Matrix::Zero(h, static_cast<Eigen::Index>(input));
  p.w_h = Matrix::Zero(h, h);
  p.b = Vector::Zero(h);
  p.activation = activation;
  return p;
}

DenseParams DenseParams::zeros(std::size_t input, std::size_t output, Activation activation) {
  DenseParams p;
  p.w = Matrix::Zero(static_cast<Eigen::Index>(output), static_cast<Eigen::Index>(input));
  p.b = Vector::Zero(static_cast<Eigen::Index>(output));
  p.activation = activation;
  return p;
}

LstmOutput lstm_forward(const LstmParams& p, const Sequence& input, const Matrix& h0,
                        const Matrix& c0, LstmCache* cache) {
  const auto hidden = static_cast<Eigen::Index>(p.hidden_size());
  require(p.w_x.rows() == 4 * hidden && p.w_h.rows() == 4 * hidden && p.w_c.size() == 4 * hidden &&
              p.b.size() == 4 * hidden,
          "lstm: inconsistent parameter shapes");
  check_sequence(input, p.input_size(), "lstm");
  const auto batch = input.front().cols();
  require(h0.rows() == hidden && h0.cols() == batch && c0.rows() == hidden && c0.cols() == batch,
          "lstm: initial state shape mismatch");

  LstmOutput out;
  out.hidden.reserve(input.size());
  out.cell.reserve(input.size());
  if (cache) cache->steps.clear();

  Matrix h = h0;
  Matrix c = c0;
  Matrix pre(4 * hidden, batch);
  for (const auto& x : input) {
    pre.noalias() = p.w_x * x;
    pre.noalias() += p.w_h * h;
    pre.colwise() += p.b;
    for (Eigen::Index gate = 0; gate < 3; ++gate) {
      pre.middleRows(gate * hidden, hidden).array() +=
          c.array().colwise() * p.w_c.segment(gate * hidden, hidden).array();
    }
    Matrix i = sigmoid_of(pre.middleRows(0, hidden).array());
    Matrix f = sigmoid_of(pre.middleRows(hidden, hidden).array());
    Matrix g = tanh_of(pre.middleRows(2 * hidden, hidden).array());
    Matrix c_next = (f.array() * c.array() + i.array() * g.array()).matrix();

    const Matrix& peep = p.output_peephole == OutputPeephole::CurrentCell ? c_next : c;
    Matrix o_pre = pre.middleRows(3 * hidden, hidden);
    o_pre.array() += peep.array().colwise() * p.w_c.segment(3 * hidden, hidden).array();
    Matrix o = sigmoid_of(o_pre.array());
    Matrix tanh_c = tanh_of(c_next.array());
    Matrix h_next = (o.array() * tanh_c.array()).matrix();

    if (cache) {
      cache->steps.push_back(
          LstmStepCache{x, h, c, std::move(i), std::move(f), std::move(g), std::move(o), c_next,
                        std::move(tanh_c), h_next});
    }
    h = std::move(h_next);
    c = std::move(c_next);
    out.hidden.push_back(h);
    out.cell.push_back(c);
  }
  return out;
}

Sequence lstm_backward(const LstmParams& p, const LstmCache& cache, const Sequence& d_hidden,
                       LstmParams& grad) {
  if (cache.steps.empty() || cache.steps.size() != d_hidden.size()) throw MissingCache();
  const auto hidden = static_cast<Eigen::Index>(p.hidden_size());
  const auto batch = cache.steps.front().h.cols();
  require(grad.w_x.rows() == p.w_x.rows() && grad.w_x.cols() == p.w_x.cols() &&
              grad.w_h.rows() == p.w_h.rows() && grad.w_c.size() == p.w_c.size() &&
              grad.b.size() == p.b.size(),
          "lstm: gradient buffer shape mismatch");

  Sequence dx(cache.steps.size());
  Matrix dh_next = Matrix::Zero(hidden, batch);
  Matrix dc_next = Matrix::Zero(hidden, batch);
  Matrix da(4 * hidden, batch);
  const bool peep_current = p.output_peephole == OutputPeephole::CurrentCell;
  const auto wci = p.w_c.segment(0, hidden).array();
  const auto wcf = p.w_c.segment(hidden, hidden).array();
  const auto wcg = p.w_c.segment(2 * hidden, hidden).array();
  const auto wco = p.w_c.segment(3 * hidden, hidden).array();

  for (std::size_t t = cache.steps.size(); t-- > 0;) {
    const LstmStepCache& s = cache.steps[t];
    require(d_hidden[t].rows() == hidden && d_hidden[t].cols() == batch,
            "lstm: upstream gradient shape mismatch");
    const Matrix dh = d_hidden[t] + dh_next;

    auto da_i = da.middleRows(0, hidden).array();
    auto da_f = da.middleRows(hidden, hidden).array();
    auto da_g = da.middleRows(2 * hidden, hidden).array();
    auto da_o = da.middleRows(3 * hidden, hidden).array();

    da_o = dh.array() * s.tanh_c.array() * s.o.array() * (1.0 - s.o.array());
    Matrix dc = dc_next;
    dc.array() += dh.array() * s.o.array() * (1.0 - s.tanh_c.array().square());
    if (peep_current) dc.array() += da_o.colwise() * wco;

    da_i = dc.array() * s.g.array() * s.i.array() * (1.0 - s.i.array());
    da_f = dc.array() * s.c_prev.array() * s.f.array() * (1.0 - s.f.array());
    da_g = dc.array() * s.i.array() * (1.0 - s.g.array().square());

    Matrix dc_prev = (dc.array() * s.f.array()).matrix();
    dc_prev.array() += da_i.colwise() * wci;
    dc_prev.array() += da_f.colwise() * wcf;
    dc_prev.array() += da_g.colwise() * wcg;
    if (!peep_current) dc_prev.array() += da_o.colwise() * wco;

    grad.w_x.noalias() += da * s.x.transpose();
    grad.w_h.noalias() += da * s.h_prev.transpose();
    grad.b += da.rowwise().sum();
    grad.w_c.segment(0, hidden) += (da_i * s.c_prev.array()).matrix().rowwise().sum();
    grad.w_c.segment(hidden, hidden) += (da_f * s.c_prev.array()).matrix().rowwise().sum();
    grad.w_c.segment(2 * hidden, hidden) += (da_g * s.c_prev.array()).matrix().rowwise().sum();
    const Matrix& peep = peep_current ? s.c : s.c_prev;
    grad.w_c.segment(3 * hidden, hidden) += (da_o * peep.array()).matrix().rowwise().sum();

    dx[t].noalias() = p.w_x.transpose() * da;
    dh_next.noalias() = p.w_h.transpose() * da;
    dc_next = std::move(dc_prev);
  }
  return dx;
}

Sequence rnn_forward(const RnnParams& p, const Sequence& input, const Matrix& h0, RnnCache* cache) {
  const auto hidden = static_cast<Eigen::Index>(p.hidden_size());
  require(p.w_x.rows() == hidden && p.w_h.rows() == hidden && p.b.size() == hidden,
          "rnn: inconsistent parameter shapes");
  check_sequence(input, p.input_size(), "rnn");
  const auto batch = input.front().cols();
  require(h0.rows() == hidden && h0.cols() == batch, "rnn: initial state shape mismatch");

  Sequence out;
  out.reserve(input.size());
  if (cache) cache->steps.clear();
  Matrix h = h0;
  Matrix pre(hidden, batch);
  for (const auto& x : input) {
    pre.noalias() = p.w_x * x;
    pre.noalias() += p.w_h * h;
    pre.colwise() += p.b;
    Matrix h_next = activate(pre, p.activation);
    if (cache) cache->steps.push_back(RnnStepCache{x, h, h_next});
    h = std::move(h_next);
    out.push_back(h);
  }
  return out;
}

Sequence rnn_backward(const RnnParams& p, const RnnCache& cache, const Sequence& d_hidden,
                      RnnParams& grad) {
  if (cache.steps.empty() || cache.steps.size() != d_hidden.size()) throw MissingCache();
  const auto hidden = static_cast<Eigen::Index>(p.hidden_size());
  const auto batch = cache.steps.front().h.cols();
  require(grad.w_x.rows() == p.w_x.rows() && grad.w_x.cols() == p.w_x.cols() &&
              grad.w_h.rows() == p.w_h.rows() && grad.b.size() == p.b.size(),
          "rnn: gradient buffer shape mismatch");

  Sequence dx(cache.steps.size());
  Matrix dh_next = Matrix::Zero(hidden, batch);
  Matrix da(hidden, batch);
  for (std::size_t t = cache.steps.size(); t-- > 0;) {
    const RnnStepCache& s = cache.steps[t];
    require(d_hidden[t].rows() == hidden && d_hidden[t].cols() == batch,
            "rnn: upstream gradient shape mismatch");
    da = d_hidden[t] + dh_next;
    switch (p.activation) {
      case Activation::Identity:
        break;
      case Activation::Tanh:
        da.array() *= 1.0 - s.h.array().square();
        break;
      case Activation::Relu:
        da.array() *= (s.h.array() > 0.0).cast<double>();
        break;
    }
    grad.w_x.noalias() += da * s.x.transpose();
    grad.w_h.noalias() += da * s.h_prev.transpose();
    grad.b += da.rowwise().sum();
    dx[t].noalias() = p.w_x.transpose() * da;
    dh_next.noalias() = p.w_h.transpose() * da;
  }
  return dx;
}

Matrix dense_forward(const DenseParams& p, const Matrix& x, DenseCache* cache) {
  require(p.b.size() == p.w.rows(), "dense: inconsistent parameter shapes");
  require(x.rows() == p.w.cols() && x.cols() > 0,
          "dense: input has " + std::to_string(x.rows()) + " rows, expected " +
              std::to_string(p.w.cols()));
  Matrix pre = p.w * x;
  pre.colwise() += p.b;
  Matrix y = activate(pre, p.activation);
  if (cache) {
    cache->x = x;
    cache->y = y;
  }
  return y;
}

Matrix dense_backward(const DenseParams& p, const DenseCache& cache, const Matrix& d_out,
                      DenseParams& grad) {
  if (cache.x.size() == 0) throw MissingCache();
  require(d_out.rows() == p.w.rows() && d_out.cols() == cache.x.cols(),
          "dense: upstream gradient shape mismatch");
  require(grad.w.rows() == p.w.rows() && grad.w.cols() == p.w.cols() && grad.b.size() == p.b.size(),
          "dense: gradient buffer shape mismatch");
  Matrix da = d_out;
  switch (p.activation) {
    case Activation::Identity:
      break;
    case Activation::Tanh:
      da.array() *= 1.0 - cache.y.array().square();
      break;
    case Activation::Relu:
      da.array() *= (cache.y.array() > 0.0).cast<double>();
      break;
  }
  grad.w.noalias() += da * cache.x.transpose();
  grad.b += da.rowwise().sum();
  return p.w.transpose() * da;
}

}  // namespace spoilage::nnet
