#pragma once

#include <Eigen/Dense>

namespace mtcnn {

// Feature maps and weight grids are dense 64-bit matrices.
// Convention for feature maps: rows = time index, cols = channels/filters.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexMatrix = Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic>;

// Flatten in time-major order: element (t, c) lands at index t * cols + c.
Vector flatten_row_major(const Matrix& m);
Matrix reshape_row_major(const Vector& v, Eigen::Index rows, Eigen::Index cols);

// Plain dot product; throws ShapeError on length mismatch.
double dot(const Vector& a, const Vector& b);

}  // namespace mtcnn
