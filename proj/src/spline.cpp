#include "mtcnn/spline.hpp"

#include <algorithm>
#include <cmath>

#include "mtcnn/errors.hpp"

namespace mtcnn {

CubicSpline::CubicSpline(const Vector& knots, double h) : y_(knots), h_(h) {
  const Eigen::Index n = knots.size();
  if (n < 2) throw InvalidArgumentError("CubicSpline: need at least 2 knots");
  if (!(h > 0.0)) throw InvalidArgumentError("CubicSpline: knot spacing must be positive");

  m_ = Vector::Zero(n);
  const Eigen::Index interior = n - 2;
  if (interior <= 0) return;

  // Tridiagonal system for interior second derivatives:
  //   m[i-1] + 4 m[i] + m[i+1] = 6 (y[i-1] - 2 y[i] + y[i+1]) / h^2
  // with m[0] = m[n-1] = 0 (natural ends). Thomas algorithm.
  Vector diag = Vector::Constant(interior, 4.0);
  Vector rhs(interior);
  for (Eigen::Index i = 0; i < interior; ++i)
    rhs[i] = 6.0 * (y_[i] - 2.0 * y_[i + 1] + y_[i + 2]) / (h * h);

  for (Eigen::Index i = 1; i < interior; ++i) {
    const double w = 1.0 / diag[i - 1];
    diag[i] -= w;
    rhs[i] -= w * rhs[i - 1];
  }
  m_[interior] = rhs[interior - 1] / diag[interior - 1];
  for (Eigen::Index i = interior - 2; i >= 0; --i)
    m_[i + 1] = (rhs[i] - m_[i + 2]) / diag[i];
}

double CubicSpline::operator()(double t) const {
  const Eigen::Index n = y_.size();
  Eigen::Index i = static_cast<Eigen::Index>(std::floor(t / h_));
  i = std::clamp<Eigen::Index>(i, 0, n - 2);
  const double s = t - static_cast<double>(i) * h_;

  const double b = (y_[i + 1] - y_[i]) / h_ - h_ * (2.0 * m_[i] + m_[i + 1]) / 6.0;
  const double c = m_[i] / 2.0;
  const double d = (m_[i + 1] - m_[i]) / (6.0 * h_);
  return y_[i] + s * (b + s * (c + s * d));
}

}  // namespace mtcnn
