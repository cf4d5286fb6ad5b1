#pragma once

#include "mtcnn/types.hpp"

namespace mtcnn {

// Natural cubic spline through uniformly spaced knots (t_i = i * h), with
// zero second derivative at both ends. Evaluation outside [0, (n-1)h] uses
// the nearest edge cubic, so a constant input extrapolates as a constant.
// The fit is linear in the knot values.
class CubicSpline {
 public:
  // Requires at least 2 knots and h > 0.
  CubicSpline(const Vector& knots, double h);

  double operator()(double t) const;

 private:
  Vector y_;   // knot values
  Vector m_;   // second derivatives at knots
  double h_;
};

}  // namespace mtcnn
