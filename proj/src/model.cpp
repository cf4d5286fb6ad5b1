#include "mtcnn/model.hpp"

#include "mtcnn/errors.hpp"

namespace mtcnn {

std::vector<Eigen::Index> default_filters(int depth) {
  std::vector<Eigen::Index> filters;
  Eigen::Index f = 16;
  for (int i = 0; i < depth; ++i, f *= 2) filters.push_back(f);
  return filters;
}

std::vector<Eigen::Index> ModelConfig::effective_filters() const {
  return filters.empty() ? default_filters(depth) : filters;
}

void ModelConfig::validate() const {
  if (depth < 1 || depth > 3) throw ConfigError("config: depth must be 1, 2 or 3");
  if (kernel_size < 1) throw ConfigError("config: kernel size must be positive");
  if (window_len < 1) throw ConfigError("config: window length must be positive");
  const auto f = effective_filters();
  if (static_cast<int>(f.size()) != depth)
    throw ConfigError("config: filter list must have one entry per conv layer");
  for (auto count : f)
    if (count < 1) throw ConfigError("config: filter counts must be positive");
  if (head == Head::Sigmoid && classes != 2)
    throw ConfigError("config: sigmoid head is binary (classes must be 2)");
  if (head == Head::Softmax && classes < 2)
    throw ConfigError("config: softmax head needs at least 2 classes");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw ConfigError("config: dropout rate must lie in [0, 1)");
  if (!class_names.empty() && static_cast<int>(class_names.size()) != classes)
    throw ConfigError("config: class name list must match class count");

  const Eigen::Index after_convs = window_len - depth * (kernel_size - 1);
  if (after_convs < 2)
    throw ConfigError("config: window of " + std::to_string(window_len) +
                      " samples is too short for " + std::to_string(depth) + " conv layers");
}

ShapeChain shape_chain(const ModelConfig& config) {
  config.validate();
  ShapeChain chain;
  Eigen::Index len = config.window_len;
  for (int l = 0; l < config.depth; ++l) {
    len = len - config.kernel_size + 1;
    chain.conv_len.push_back(len);
  }
  chain.pool_len = len / 2;
  chain.flatten_width = chain.pool_len * config.effective_filters().back();
  return chain;
}

std::vector<ParamBuffer> Model::params() {
  std::vector<ParamBuffer> buffers;
  for (std::size_t l = 0; l < conv.size(); ++l) {
    const std::string tag = "conv" + std::to_string(l + 1);
    buffers.push_back({tag + ".kernels", &conv[l].kernels, &conv[l].kernels_grad});
    buffers.push_back({tag + ".bias", &conv[l].bias, &conv[l].bias_grad});
  }
  buffers.push_back({"dense.weights", &dense.weights, &dense.weights_grad});
  buffers.push_back({"dense.bias", &dense.bias, &dense.bias_grad});
  return buffers;
}

std::vector<std::pair<std::string, const Matrix*>> Model::param_values() const {
  std::vector<std::pair<std::string, const Matrix*>> buffers;
  for (std::size_t l = 0; l < conv.size(); ++l) {
    const std::string tag = "conv" + std::to_string(l + 1);
    buffers.emplace_back(tag + ".kernels", &conv[l].kernels);
    buffers.emplace_back(tag + ".bias", &conv[l].bias);
  }
  buffers.emplace_back("dense.weights", &dense.weights);
  buffers.emplace_back("dense.bias", &dense.bias);
  return buffers;
}

Model init_model(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  const ShapeChain chain = shape_chain(config);
  SeededGenerator gen(seed);

  Model model;
  model.config = config;
  model.init_seed = seed;
  Eigen::Index in_channels = 1;
  for (auto filters : config.effective_filters()) {
    model.conv.push_back(make_conv1d(in_channels, filters, config.kernel_size, gen));
    in_channels = filters;
  }
  model.dense = make_dense(chain.flatten_width, config.output_units(), config.head,
                           config.dense_bias, gen);
  return model;
}

void zero_grads(Model& model) {
  for (auto& layer : model.conv) {
    layer.kernels_grad.setZero();
    layer.bias_grad.setZero();
  }
  model.dense.weights_grad.setZero();
  model.dense.bias_grad.setZero();
}

namespace {

template <typename Fn>
auto at_layer(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const ShapeError& e) {
    throw ShapeError(name + ": " + e.what());
  }
}

}  // namespace

Vector model_forward(const Model& model, const Vector& x, ForwardCache* cache,
                     const Vector* dropout_mask, ActivationTrace* trace) {
  if (x.size() != model.config.window_len)
    throw ShapeError("model: expected window of " + std::to_string(model.config.window_len) +
                     " samples, got " + std::to_string(x.size()));

  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c = ForwardCache{};

  Matrix current = x;  // N x 1 feature map
  if (trace) trace->maps.emplace_back("input", current);

  for (std::size_t l = 0; l < model.conv.size(); ++l) {
    const std::string tag = "conv" + std::to_string(l + 1);
    c.conv_in.push_back(current);
    Matrix pre = at_layer(tag, [&] { return conv1d_forward(model.conv[l], current); });
    current = relu(pre);
    c.conv_pre.push_back(std::move(pre));
    if (trace) trace->maps.emplace_back(tag, current);
  }

  c.pool_in = current;
  PoolResult pooled = at_layer("maxpool", [&] { return maxpool1d_forward(current); });
  c.pool_argmax = std::move(pooled.argmax);
  if (trace) trace->maps.emplace_back("maxpool", pooled.out);

  c.flat = flatten(pooled.out);
  Vector dense_in = c.flat;
  if (dropout_mask) {
    if (dropout_mask->size() != dense_in.size())
      throw ShapeError("dropout: mask length " + std::to_string(dropout_mask->size()) +
                       " does not match flatten width " + std::to_string(dense_in.size()));
    c.dropout_mask = *dropout_mask;
    dense_in = dense_in.cwiseProduct(*dropout_mask);
  }
  c.dense_in = dense_in;
  if (trace) trace->maps.emplace_back("flatten", Matrix(dense_in));

  c.probs = at_layer("dense", [&] { return dense_forward(model.dense, dense_in); });
  if (trace) trace->maps.emplace_back("output", Matrix(c.probs));
  c.valid = true;
  return c.probs;
}

void model_backward(Model& model, const ForwardCache& cache, const Vector& grad_probs) {
  if (!cache.valid) throw StateError("model_backward: forward cache missing");

  Vector grad_dense_in =
      dense_backward(model.dense, cache.dense_in, cache.probs, grad_probs);
  Vector grad_flat = cache.dropout_mask.size() > 0
                         ? Vector(grad_dense_in.cwiseProduct(cache.dropout_mask))
                         : grad_dense_in;

  const Eigen::Index channels = cache.pool_argmax.cols();
  const Eigen::Index pool_rows = cache.pool_argmax.rows();
  Matrix grad_pool_out = unflatten(grad_flat, pool_rows, channels);
  Matrix grad = maxpool1d_backward(cache.pool_argmax, cache.pool_in.rows(), grad_pool_out);

  for (auto l = static_cast<std::ptrdiff_t>(model.conv.size()) - 1; l >= 0; --l) {
    const Matrix grad_pre = relu_backward(cache.conv_pre[l], grad);
    grad = conv1d_backward(model.conv[l], cache.conv_in[l], grad_pre);
  }
}

}  // namespace mtcnn
