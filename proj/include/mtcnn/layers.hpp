#pragma once

#include "mtcnn/rng.hpp"
#include "mtcnn/types.hpp"

namespace mtcnn {

enum class Head { Sigmoid, Softmax };

// Valid (no padding) 1D sliding-window correlation layer, stride 1.
// Kernels are stored flattened time-major: entry (m * in_channels + ch, f)
// weights input offset m, channel ch of filter f. The He-uniform init uses
// fan_in = kernel_size * in_channels; biases start at zero.
struct Conv1dLayer {
  Eigen::Index in_channels = 1;
  Eigen::Index filters = 16;
  Eigen::Index kernel_size = 5;
  Matrix kernels;       // (kernel_size * in_channels) x filters
  Matrix bias;          // filters x 1
  Matrix kernels_grad;  // paired gradient storage, same shapes
  Matrix bias_grad;
};

Conv1dLayer make_conv1d(Eigen::Index in_channels, Eigen::Index filters,
                        Eigen::Index kernel_size, SeededGenerator& gen);

// Patch matrix for valid correlation: row n = x[n .. n+v-1, :] flattened
// time-major, so conv1d_forward is patches * kernels.
Matrix im2col(const Matrix& x, Eigen::Index kernel_size);

// out(n, f) = bias_f + sum_{m, ch} x(n+m, ch) * k_f(m, ch); length N - v + 1.
// Activation is NOT applied here. Throws ShapeError if x is shorter than the
// kernel or has the wrong channel count.
Matrix conv1d_forward(const Conv1dLayer& layer, const Matrix& x);

// Accumulates kernel/bias gradients (+=) and returns dLoss/dx.
Matrix conv1d_backward(Conv1dLayer& layer, const Matrix& x, const Matrix& grad_out);

Matrix relu(const Matrix& x);
// Gates grad_out on pre > 0.
Matrix relu_backward(const Matrix& pre, const Matrix& grad_out);

// Max pooling with pool size = stride = 2; an odd trailing element is
// dropped. argmax holds the winning input row per (output row, channel).
struct MaxPool1dLayer {
  Eigen::Index pool = 2;
  Eigen::Index stride = 2;
};

struct PoolResult {
  Matrix out;
  IndexMatrix argmax;
};

PoolResult maxpool1d_forward(const Matrix& x);
// Routes grad_out rows back to the cached argmax positions.
Matrix maxpool1d_backward(const IndexMatrix& argmax, Eigen::Index in_len,
                          const Matrix& grad_out);

// Time-major flatten: (t, c) -> t * channels + c.
Vector flatten(const Matrix& x);
Matrix unflatten(const Vector& v, Eigen::Index rows, Eigen::Index cols);

struct DropoutLayer {
  double rate = 0.25;
  bool train_mode = false;
};

// Inverted-dropout mask: entries are 0 with probability rate, else
// 1 / (1 - rate), so inference needs no rescaling.
Vector make_dropout_mask(Eigen::Index n, double rate, SeededGenerator& gen);

// Training mode draws a fresh mask from gen; inference is the identity.
Vector dropout_apply(const DropoutLayer& layer, const Vector& x, SeededGenerator& gen);

// Fully connected head. No bias by default; z = W^T x (+ b), then sigmoid
// (one unit) or softmax (M units). Glorot-uniform init, zero bias.
struct DenseLayer {
  Matrix weights;  // in_width x out_units
  Matrix bias;     // out_units x 1, stays zero unless use_bias
  bool use_bias = false;
  Head activation = Head::Sigmoid;
  Matrix weights_grad;
  Matrix bias_grad;
};

DenseLayer make_dense(Eigen::Index in_width, Eigen::Index out_units, Head activation,
                      bool use_bias, SeededGenerator& gen);

Vector sigmoid(const Vector& z);
Vector softmax(const Vector& z);

// Applies the configured activation; optionally exposes the pre-activation.
Vector dense_forward(const DenseLayer& layer, const Vector& x, Vector* pre_out = nullptr);

// Takes dLoss/dprobs, applies the head Jacobian, accumulates weight/bias
// gradients and returns dLoss/dx.
Vector dense_backward(DenseLayer& layer, const Vector& x, const Vector& probs,
                      const Vector& grad_probs);

}  // namespace mtcnn
