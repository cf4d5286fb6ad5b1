#include "mtcnn/adam.hpp"

#include <cmath>

#include "mtcnn/errors.hpp"

namespace mtcnn {

AdamState make_adam(const std::vector<ParamBuffer>& buffers, double lr) {
  AdamState state;
  state.lr = lr;
  state.m.reserve(buffers.size());
  state.v.reserve(buffers.size());
  for (const auto& buffer : buffers) {
    state.m.push_back(Matrix::Zero(buffer.value->rows(), buffer.value->cols()));
    state.v.push_back(Matrix::Zero(buffer.value->rows(), buffer.value->cols()));
  }
  return state;
}

void adam_step(AdamState& state, const std::vector<ParamBuffer>& buffers) {
  if (buffers.size() != state.m.size())
    throw ShapeError("adam_step: buffer count does not match state");
  ++state.t;
  const double m_corr = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double v_corr = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

  for (std::size_t i = 0; i < buffers.size(); ++i) {
    Matrix& value = *buffers[i].value;
    const Matrix& grad = *buffers[i].grad;
    if (value.rows() != state.m[i].rows() || value.cols() != state.m[i].cols() ||
        grad.rows() != value.rows() || grad.cols() != value.cols())
      throw ShapeError("adam_step: shape mismatch in buffer '" + buffers[i].name + "'");

    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad;
    state.v[i] = state.beta2 * state.v[i].array().matrix() +
                 (1.0 - state.beta2) * grad.array().square().matrix();
    const auto m_hat = state.m[i].array() / m_corr;
    const auto v_hat = state.v[i].array() / v_corr;
    value.array() -= state.lr * m_hat / (v_hat.sqrt() + state.epsilon);
  }
}

}  // namespace mtcnn
