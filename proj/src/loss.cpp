#include "mtcnn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "mtcnn/errors.hpp"

namespace mtcnn {
namespace {

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

void check_one_hot(const Vector& y) {
  int ones = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1.0)
      ++ones;
    else if (y[i] != 0.0)
      throw InvalidArgumentError("label must be one-hot (entries 0 or 1)");
  }
  if (ones != 1) throw InvalidArgumentError("label must be one-hot (exactly one 1)");
}

}  // namespace

double bce_loss(double p, int y) {
  if (y != 0 && y != 1) throw InvalidArgumentError("bce: label must be 0 or 1");
  const double pc = clamp_prob(p);
  return -(y * std::log(pc) + (1 - y) * std::log(1.0 - pc));
}

double bce_grad(double p, int y) {
  if (y != 0 && y != 1) throw InvalidArgumentError("bce: label must be 0 or 1");
  const double pc = clamp_prob(p);
  return -(y / pc - (1 - y) / (1.0 - pc));
}

Vector one_hot(int label, Eigen::Index classes) {
  if (label < 0 || label >= classes)
    throw InvalidArgumentError("one_hot: label " + std::to_string(label) + " out of range");
  Vector y = Vector::Zero(classes);
  y[label] = 1.0;
  return y;
}

double cce_loss(const Vector& probs, const Vector& one_hot_label) {
  if (probs.size() != one_hot_label.size()) throw ShapeError("cce: length mismatch");
  check_one_hot(one_hot_label);
  double loss = 0.0;
  for (Eigen::Index c = 0; c < probs.size(); ++c)
    if (one_hot_label[c] == 1.0) loss -= std::log(clamp_prob(probs[c]));
  return loss;
}

Vector cce_grad(const Vector& probs, const Vector& one_hot_label) {
  if (probs.size() != one_hot_label.size()) throw ShapeError("cce: length mismatch");
  check_one_hot(one_hot_label);
  Vector grad = Vector::Zero(probs.size());
  for (Eigen::Index c = 0; c < probs.size(); ++c)
    if (one_hot_label[c] == 1.0) grad[c] = -1.0 / clamp_prob(probs[c]);
  return grad;
}

}  // namespace mtcnn
