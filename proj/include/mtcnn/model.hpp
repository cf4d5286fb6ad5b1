#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mtcnn/layers.hpp"
#include "mtcnn/rng.hpp"
#include "mtcnn/types.hpp"

namespace mtcnn {

// Filter counts double per conv layer: 16, 32, 64.
std::vector<Eigen::Index> default_filters(int depth);

struct ModelConfig {
  Eigen::Index window_len = 5000;
  int depth = 2;  // number of conv layers, 1..3
  Eigen::Index kernel_size = 5;
  std::vector<Eigen::Index> filters;  // defaulted from depth when empty
  int classes = 2;
  Head head = Head::Sigmoid;  // sigmoid => one output unit, threshold 0.5
  bool dense_bias = false;
  double dropout_rate = 0.25;
  // Class label names in canonical task order; index = class id. Optional
  // for in-memory use, required by checkpoint/eval plumbing.
  std::vector<std::string> class_names;

  Eigen::Index output_units() const { return head == Head::Sigmoid ? 1 : classes; }
  std::vector<Eigen::Index> effective_filters() const;
  // Throws ConfigError when inconsistent (depth, head/classes, window too
  // short for the conv chain).
  void validate() const;
};

// The published dimension arithmetic: each conv shrinks length by v - 1,
// the pool halves it (floor), flatten multiplies by the last filter count.
struct ShapeChain {
  std::vector<Eigen::Index> conv_len;  // output length per conv layer
  Eigen::Index pool_len = 0;
  Eigen::Index flatten_width = 0;
};
ShapeChain shape_chain(const ModelConfig& config);

// Named view over one parameter matrix and its gradient.
struct ParamBuffer {
  std::string name;
  Matrix* value = nullptr;
  Matrix* grad = nullptr;
};

struct Model {
  ModelConfig config;
  std::uint64_t init_seed = 0;
  std::vector<Conv1dLayer> conv;
  DenseLayer dense;

  // Buffers in declared order: conv kernels/bias per layer, then dense
  // weights and bias. Checkpoints and Adam follow this order.
  std::vector<ParamBuffer> params();
  std::vector<std::pair<std::string, const Matrix*>> param_values() const;
};

// Deterministic initialization: same (config, seed) gives bit-identical
// parameters.
Model init_model(const ModelConfig& config, std::uint64_t seed);

struct ForwardCache {
  bool valid = false;
  std::vector<Matrix> conv_in;   // input feature map per conv layer
  std::vector<Matrix> conv_pre;  // pre-activation per conv layer
  Matrix pool_in;
  IndexMatrix pool_argmax;
  Vector flat;          // flatten output, before dropout
  Vector dropout_mask;  // empty in inference mode
  Vector dense_in;
  Vector probs;
};

// Per-layer feature-map snapshots for one input window.
struct ActivationTrace {
  std::vector<std::pair<std::string, Matrix>> maps;
};

// Runs the full chain conv(+ReLU) x depth -> maxpool -> flatten(+dropout)
// -> dense. dropout_mask null means inference (dropout is the identity).
// Shape errors carry the failing layer's name.
Vector model_forward(const Model& model, const Vector& x, ForwardCache* cache = nullptr,
                     const Vector* dropout_mask = nullptr, ActivationTrace* trace = nullptr);

void zero_grads(Model& model);

// Accumulates (+=) analytic gradients for every parameter from dLoss/dprobs.
// Requires the cache of a forward pass over the same input (StateError
// otherwise).
void model_backward(Model& model, const ForwardCache& cache, const Vector& grad_probs);

}  // namespace mtcnn
