#pragma once

// Shared test utilities: naive reference implementations kept deliberately
// independent of the library's computation paths, plus small harness bits.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "mtcnn/layers.hpp"
#include "mtcnn/model.hpp"
#include "mtcnn/rng.hpp"
#include "mtcnn/types.hpp"

namespace testutil {

using mtcnn::Matrix;
using mtcnn::SeededGenerator;
using mtcnn::Vector;

// Sliding-window correlation, scalar loops only.
inline Matrix naive_conv1d(const Matrix& x, const Matrix& kernels, const Matrix& bias,
                           Eigen::Index kernel_size) {
  const Eigen::Index channels = x.cols();
  const Eigen::Index filters = kernels.cols();
  const Eigen::Index out_len = x.rows() - kernel_size + 1;
  Matrix out(out_len, filters);
  for (Eigen::Index f = 0; f < filters; ++f)
    for (Eigen::Index n = 0; n < out_len; ++n) {
      double acc = bias(f, 0);
      for (Eigen::Index m = 0; m < kernel_size; ++m)
        for (Eigen::Index ch = 0; ch < channels; ++ch)
          acc += kernels(m * channels + ch, f) * x(n + m, ch);
      out(n, f) = acc;
    }
  return out;
}

inline Matrix naive_maxpool2(const Matrix& x) {
  const Eigen::Index out_len = x.rows() / 2;
  Matrix out(out_len, x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (Eigen::Index h = 0; h < out_len; ++h)
      out(h, c) = x(2 * h, c) > x(2 * h + 1, c) ? x(2 * h, c) : x(2 * h + 1, c);
  return out;
}

// Two-pass rms.
inline double naive_rms(const Vector& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += x[i] * x[i];
  return std::sqrt(sum / static_cast<double>(x.size()));
}

inline double naive_dot(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Second implementation of the four confusion metrics. -1 marks undefined.
struct NaiveMetrics {
  double accuracy = -1.0, precision = -1.0, recall = -1.0, f1 = -1.0;
};

inline NaiveMetrics naive_metrics(long tp, long tn, long fp, long fn) {
  NaiveMetrics m;
  if (tp + tn + fp + fn > 0)
    m.accuracy = double(tp + tn) / double(tp + tn + fp + fn);
  if (tp + fp > 0) m.precision = double(tp) / double(tp + fp);
  if (tp + fn > 0) m.recall = double(tp) / double(tp + fn);
  if (m.precision >= 0.0 && m.recall >= 0.0 && m.precision + m.recall > 0.0)
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

inline Vector random_vector(SeededGenerator& gen, Eigen::Index n, double lo = -1.0,
                            double hi = 1.0) {
  return mtcnn::uniform_in(gen, lo, hi, n);
}

inline Matrix random_matrix(SeededGenerator& gen, Eigen::Index rows, Eigen::Index cols,
                            double lo = -1.0, double hi = 1.0) {
  const Vector draws = mtcnn::uniform_in(gen, lo, hi, rows * cols);
  return Eigen::Map<const Matrix>(draws.data(), rows, cols);
}

inline double rel_err(double a, double b) {
  const double scale = std::max({1e-6, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

// Central finite difference of fn at +/- h around the current value of slot.
template <typename Fn>
double central_diff(double& slot, double h, Fn&& fn) {
  const double saved = slot;
  slot = saved + h;
  const double up = fn();
  slot = saved - h;
  const double down = fn();
  slot = saved;
  return (up - down) / (2.0 * h);
}

// Fresh unique directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("mtcnn_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "rb");
  if (!f) return {};
  std::string data;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) data.append(buf, n);
  std::fclose(f);
  return data;
}

}  // namespace testutil
