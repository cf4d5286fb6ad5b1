#include "mtcnn/trace_export.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "mtcnn/csv.hpp"
#include "mtcnn/errors.hpp"

namespace mtcnn {

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_matrix_pgm(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";

  const double lo = m.minCoeff();
  const double hi = m.maxCoeff();
  const double span = hi - lo;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double scaled = span > 0.0 ? (m(r, c) - lo) / span * 255.0 : 0.0;
      out.put(static_cast<char>(std::clamp(static_cast<int>(std::lround(scaled)), 0, 255)));
    }
  if (!out) throw IoError("write failed for '" + path + "'");
}

namespace {

std::string sanitize(std::string name) {
  std::replace(name.begin(), name.end(), '.', '_');
  return name;
}

}  // namespace

void export_trace(const std::string& dir, const ActivationTrace& trace) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, map] : trace.maps) {
    const auto base = (std::filesystem::path(dir) / ("activation_" + sanitize(name))).string();
    write_matrix_csv(base + ".csv", map);
    write_matrix_pgm(base + ".pgm", map);
  }
}

void export_weights(const std::string& dir, const Model& model) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, value] : model.param_values()) {
    const auto base = (std::filesystem::path(dir) / ("weights_" + sanitize(name))).string();
    write_matrix_csv(base + ".csv", *value);
    write_matrix_pgm(base + ".pgm", *value);
  }
}

}  // namespace mtcnn
