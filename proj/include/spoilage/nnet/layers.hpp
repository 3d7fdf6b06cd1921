#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spoilage::nnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One matrix per time step, features x batch (each column is one sample).
using Sequence = std::vector<Matrix>;

enum class Activation { Identity, Tanh, Relu };

/// Which cell state feeds the output-gate peephole.
enum class OutputPeephole { CurrentCell, PreviousCell };

/// Peephole LSTM:
///   i = sig(Wxi x + Whi h' + wci * c' + bi)
///   f = sig(Wxf x + Whf h' + wcf * c' + bf)
///   g = tanh(Wxg x + Whg h' + wcg * c' + bg)
///   o = sig(Wxo x + Who h' + wco * c_o + bo),  c_o = c (default) or c'
///   c = f * c' + i * g,   h = o * tanh(c)
/// where h', c' are the previous step's states and the peephole weights act
/// elementwise. Gate blocks are stacked in the order i, f, g, o, so rows
/// [k*H, (k+1)*H) of every array belong to gate k.
struct LstmParams {
  Matrix w_x;  // 4H x I
  Matrix w_h;  // 4H x H
  Vector w_c;  // 4H
  Vector b;    // 4H
  OutputPeephole output_peephole = OutputPeephole::CurrentCell;

  std::size_t input_size() const { return static_cast<std::size_t>(w_x.cols()); }
  std::size_t hidden_size() const { return static_cast<std::size_t>(w_h.cols()); }

  static LstmParams zeros(std::size_t input, std::size_t hidden);
};

/// h = activation(Wxh x + Whh h' + b)
struct RnnParams {
  Matrix w_x;  // H x I
  Matrix w_h;  // H x H
  Vector b;    // H
  Activation activation = Activation::Tanh;

  std::size_t input_size() const { return static_cast<std::size_t>(w_x.cols()); }
  std::size_t hidden_size() const { return static_cast<std::size_t>(w_h.cols()); }

  static RnnParams zeros(std::size_t input, std::size_t hidden, Activation activation);
};

/// y = activation(W x + b)
struct DenseParams {
  Matrix w;  // out x in
  Vector b;  // out
  Activation activation = Activation::Identity;

  std::size_t input_size() const { return static_cast<std::size_t>(w.cols()); }
  std::size_t output_size() const { return static_cast<std::size_t>(w.rows()); }

  static DenseParams zeros(std::size_t input, std::size_t output, Activation activation);
};

struct LstmStepCache {
  Matrix x, h_prev, c_prev;
  Matrix i, f, g, o;
  Matrix c, tanh_c, h;
};

struct LstmCache {
  std::vector<LstmStepCache> steps;
};

struct RnnStepCache {
  Matrix x, h_prev, h;
};

struct RnnCache {
  std::vector<RnnStepCache> steps;
};

struct DenseCache {
  Matrix x, y;
};

struct LstmOutput {
  Sequence hidden;
  Sequence cell;
};

/// Runs the LSTM over `input` from (h0, c0); both are H x batch.
LstmOutput lstm_forward(const LstmParams& params, const Sequence& input, const Matrix& h0,
                        const Matrix& c0, LstmCache* cache = nullptr);

Sequence rnn_forward(const RnnParams& params, const Sequence& input, const Matrix& h0,
                     RnnCache* cache = nullptr);

Matrix dense_forward(const DenseParams& params, const Matrix& x, DenseCache* cache = nullptr);

/// Backpropagation through time. `d_hidden[t]` is dLoss/dh_t arriving from
/// above (may be zero matrices). Accumulates into `grad` (sums over the
/// batch) and returns dLoss/dx_t per step. The initial states are treated as
/// constants.
Sequence lstm_backward(const LstmParams& params, const LstmCache& cache, const Sequence& d_hidden,
                       LstmParams& grad);

Sequence rnn_backward(const RnnParams& params, const RnnCache& cache, const Sequence& d_hidden,
                      RnnParams& grad);

Matrix dense_backward(const DenseParams& params, const DenseCache& cache, const Matrix& d_out,
                      DenseParams& grad);

Matrix activate(const Matrix& pre, Activation activation);

}  // namespace spoilage::nnet
