#pragma once

#include "mtcnn/types.hpp"

namespace mtcnn {

// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before logs.
inline constexpr double kProbClamp = 1e-12;

// Binary cross entropy: -(y log p + (1-y) log(1-p)). y must be 0 or 1.
double bce_loss(double p, int y);
// dLoss/dp with the same clamping.
double bce_grad(double p, int y);

Vector one_hot(int label, Eigen::Index classes);

// Categorical cross entropy: -sum_c y_c log p_c over a one-hot y.
// Throws InvalidArgumentError when y is not one-hot.
double cce_loss(const Vector& probs, const Vector& one_hot_label);
Vector cce_grad(const Vector& probs, const Vector& one_hot_label);

}  // namespace mtcnn
