#include "mtcnn/types.hpp"

#include "mtcnn/errors.hpp"

namespace mtcnn {

Vector flatten_row_major(const Matrix& m) {
  Vector v(m.size());
  using RowMajorMap =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  RowMajorMap(v.data(), m.rows(), m.cols()) = m;
  return v;
}

Matrix reshape_row_major(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw ShapeError("reshape: vector of length " + std::to_string(v.size()) +
                     " does not fill " + std::to_string(rows) + "x" + std::to_string(cols));
  using ConstRowMajorMap =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  return ConstRowMajorMap(v.data(), rows, cols);
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw ShapeError("dot: length mismatch " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  return a.dot(b);
}

}  // namespace mtcnn
