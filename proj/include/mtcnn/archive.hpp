#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtcnn/signal.hpp"
#include "mtcnn/types.hpp"

namespace mtcnn {

// One indexed window. Contamination provenance columns stay empty for clean
// archives.
struct ArchiveEntry {
  std::string id;
  std::string subject_id;
  std::string trial_id;
  TaskLabel label = TaskLabel::BT;
  std::int64_t offset = 0;  // first-sample index within the source record

  std::string clean_id;  // id of the clean window a realization came from
  std::string oa_id, ma_id;
  std::int64_t oa_offset = -1, ma_offset = -1;
  double lambda = 0.0, beta = 0.0;
  std::optional<double> snr;
  bool contaminated = false;
};

// On disk: <dir>/index.csv plus <dir>/samples.bin, a flat little-endian
// float64 block with window i at byte offset i * window_len * 8. One index
// row per window; all windows share fs and length.
struct WindowArchive {
  double fs = 0.0;
  Eigen::Index window_len = 0;
  std::vector<ArchiveEntry> entries;
  Matrix samples;  // window_len x count, column i = window i

  Eigen::Index count() const { return samples.cols(); }
  // Index of the entry with this id, or -1.
  Eigen::Index find(const std::string& id) const;
};

void write_archive(const std::string& dir, const WindowArchive& archive);
WindowArchive read_archive(const std::string& dir);

}  // namespace mtcnn
