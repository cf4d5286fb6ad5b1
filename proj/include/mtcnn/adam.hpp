#pragma once

#include <vector>

#include "mtcnn/model.hpp"
#include "mtcnn/types.hpp"

namespace mtcnn {

// Bias-corrected Adam over a fixed set of parameter buffers. Learning rate
// comes from the training protocol; beta1/beta2/epsilon are the canonical
// defaults.
struct AdamState {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long t = 0;                 // completed batch updates
  std::vector<Matrix> m, v;   // first/second moments, shaped like the buffers
};

AdamState make_adam(const std::vector<ParamBuffer>& buffers, double lr = 0.001);

// One update from the gradients currently stored in the buffers. Throws
// ShapeError if buffer shapes no longer match the state.
void adam_step(AdamState& state, const std::vector<ParamBuffer>& buffers);

}  // namespace mtcnn
