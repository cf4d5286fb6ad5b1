#include "mtcnn/layers.hpp"

#include <cmath>

#include "mtcnn/errors.hpp"

namespace mtcnn {

Conv1dLayer make_conv1d(Eigen::Index in_channels, Eigen::Index filters,
                        Eigen::Index kernel_size, SeededGenerator& gen) {
  if (in_channels < 1 || filters < 1 || kernel_size < 1)
    throw InvalidArgumentError("make_conv1d: dimensions must be positive");
  Conv1dLayer layer;
  layer.in_channels = in_channels;
  layer.filters = filters;
  layer.kernel_size = kernel_size;

  const Eigen::Index rows = kernel_size * in_channels;
  const Vector draws = he_uniform(gen, rows, rows * filters);
  layer.kernels = Eigen::Map<const Matrix>(draws.data(), rows, filters);  // column per filter
  layer.bias = Matrix::Zero(filters, 1);
  layer.kernels_grad = Matrix::Zero(rows, filters);
  layer.bias_grad = Matrix::Zero(filters, 1);
  return layer;
}

Matrix im2col(const Matrix& x, Eigen::Index kernel_size) {
  const Eigen::Index n = x.rows();
  const Eigen::Index channels = x.cols();
  if (n < kernel_size)
    throw ShapeError("conv1d: input length " + std::to_string(n) + " shorter than kernel " +
                     std::to_string(kernel_size));
  const Eigen::Index out_len = n - kernel_size + 1;
  Matrix patches(out_len, kernel_size * channels);
  for (Eigen::Index m = 0; m < kernel_size; ++m)
    for (Eigen::Index ch = 0; ch < channels; ++ch)
      patches.col(m * channels + ch) = x.col(ch).segment(m, out_len);
  return patches;
}

Matrix conv1d_forward(const Conv1dLayer& layer, const Matrix& x) {
  if (x.cols() != layer.in_channels)
    throw ShapeError("conv1d: expected " + std::to_string(layer.in_channels) +
                     " channels, got " + std::to_string(x.cols()));
  if (x.rows() < layer.kernel_size)
    throw ShapeError("conv1d: input length " + std::to_string(x.rows()) +
                     " shorter than kernel " + std::to_string(layer.kernel_size));

  // Accumulate taps in a fixed order (offset-major, then channel): each
  // output is bias + k_0 x_0 + k_1 x_1 + ..., the sliding-window expansion,
  // summed identically to the definition. Keeps results reproducible and
  // lets oracles match bit for bit.
  const Eigen::Index out_len = x.rows() - layer.kernel_size + 1;
  Matrix out(out_len, layer.filters);
  for (Eigen::Index f = 0; f < layer.filters; ++f) {
    out.col(f).setConstant(layer.bias(f, 0));
    for (Eigen::Index m = 0; m < layer.kernel_size; ++m)
      for (Eigen::Index ch = 0; ch < layer.in_channels; ++ch)
        out.col(f) += layer.kernels(m * layer.in_channels + ch, f) * x.col(ch).segment(m, out_len);
  }
  return out;
}

Matrix conv1d_backward(Conv1dLayer& layer, const Matrix& x, const Matrix& grad_out) {
  const Eigen::Index out_len = x.rows() - layer.kernel_size + 1;
  if (grad_out.rows() != out_len || grad_out.cols() != layer.filters)
    throw ShapeError("conv1d_backward: gradient shape mismatch");

  const Matrix patches = im2col(x, layer.kernel_size);
  layer.kernels_grad += patches.transpose() * grad_out;
  layer.bias_grad.col(0) += grad_out.colwise().sum().transpose();

  // Scatter patch gradients back onto the input timeline.
  const Matrix patch_grad = grad_out * layer.kernels.transpose();
  Matrix grad_in = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index m = 0; m < layer.kernel_size; ++m)
    for (Eigen::Index ch = 0; ch < layer.in_channels; ++ch)
      grad_in.col(ch).segment(m, out_len) += patch_grad.col(m * layer.in_channels + ch);
  return grad_in;
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix relu_backward(const Matrix& pre, const Matrix& grad_out) {
  if (pre.rows() != grad_out.rows() || pre.cols() != grad_out.cols())
    throw ShapeError("relu_backward: shape mismatch");
  return (pre.array() > 0.0).select(grad_out, Matrix::Zero(pre.rows(), pre.cols()));
}

PoolResult maxpool1d_forward(const Matrix& x) {
  if (x.rows() < 2) throw ShapeError("maxpool1d: input length must be >= 2");
  const Eigen::Index out_len = x.rows() / 2;
  PoolResult result;
  result.out.resize(out_len, x.cols());
  result.argmax.resize(out_len, x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index h = 0; h < out_len; ++h) {
      const Eigen::Index first = 2 * h;
      // Ties keep the earlier index.
      if (x(first, c) >= x(first + 1, c)) {
        result.out(h, c) = x(first, c);
        result.argmax(h, c) = first;
      } else {
        result.out(h, c) = x(first + 1, c);
        result.argmax(h, c) = first + 1;
      }
    }
  }
  return result;
}

Matrix maxpool1d_backward(const IndexMatrix& argmax, Eigen::Index in_len,
                          const Matrix& grad_out) {
  if (grad_out.rows() != argmax.rows() || grad_out.cols() != argmax.cols())
    throw ShapeError("maxpool1d_backward: gradient shape mismatch");
  Matrix grad_in = Matrix::Zero(in_len, grad_out.cols());
  for (Eigen::Index c = 0; c < grad_out.cols(); ++c)
    for (Eigen::Index h = 0; h < grad_out.rows(); ++h)
      grad_in(argmax(h, c), c) += grad_out(h, c);
  return grad_in;
}

Vector flatten(const Matrix& x) { return flatten_row_major(x); }

Matrix unflatten(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return reshape_row_major(v, rows, cols);
}

Vector make_dropout_mask(Eigen::Index n, double rate, SeededGenerator& gen) {
  if (rate < 0.0 || rate >= 1.0)
    throw InvalidArgumentError("dropout: rate must lie in [0, 1)");
  const double scale = 1.0 / (1.0 - rate);
  Vector mask(n);
  for (Eigen::Index i = 0; i < n; ++i) mask[i] = gen.next_double() < rate ? 0.0 : scale;
  return mask;
}

Vector dropout_apply(const DropoutLayer& layer, const Vector& x, SeededGenerator& gen) {
  if (!layer.train_mode || layer.rate == 0.0) return x;
  return x.cwiseProduct(make_dropout_mask(x.size(), layer.rate, gen));
}

DenseLayer make_dense(Eigen::Index in_width, Eigen::Index out_units, Head activation,
                      bool use_bias, SeededGenerator& gen) {
  if (in_width < 1 || out_units < 1)
    throw InvalidArgumentError("make_dense: dimensions must be positive");
  DenseLayer layer;
  layer.activation = activation;
  layer.use_bias = use_bias;
  const Vector draws = glorot_uniform(gen, in_width, out_units, in_width * out_units);
  layer.weights = Eigen::Map<const Matrix>(draws.data(), in_width, out_units);
  layer.bias = Matrix::Zero(out_units, 1);
  layer.weights_grad = Matrix::Zero(in_width, out_units);
  layer.bias_grad = Matrix::Zero(out_units, 1);
  return layer;
}

Vector sigmoid(const Vector& z) {
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Vector softmax(const Vector& z) {
  const double shift = z.maxCoeff();
  Vector e = (z.array() - shift).exp();
  return e / e.sum();
}

Vector dense_forward(const DenseLayer& layer, const Vector& x, Vector* pre_out) {
  if (x.size() != layer.weights.rows())
    throw ShapeError("dense: expected input width " + std::to_string(layer.weights.rows()) +
                     ", got " + std::to_string(x.size()));
  Vector z = layer.weights.transpose() * x;
  if (layer.use_bias) z += layer.bias.col(0);
  if (pre_out) *pre_out = z;
  return layer.activation == Head::Sigmoid ? sigmoid(z) : softmax(z);
}

Vector dense_backward(DenseLayer& layer, const Vector& x, const Vector& probs,
                      const Vector& grad_probs) {
  if (grad_probs.size() != probs.size())
    throw ShapeError("dense_backward: gradient shape mismatch");

  Vector grad_z(probs.size());
  if (layer.activation == Head::Sigmoid) {
    grad_z = grad_probs.array() * probs.array() * (1.0 - probs.array());
  } else {
    const double weighted = grad_probs.dot(probs);
    grad_z = probs.array() * (grad_probs.array() - weighted);
  }

  layer.weights_grad += x * grad_z.transpose();
  if (layer.use_bias) layer.bias_grad.col(0) += grad_z;
  return layer.weights * grad_z;
}

}  // namespace mtcnn
