#pragma once

#include <string>
#include <vector>

#include "mtcnn/signal.hpp"

namespace mtcnn {

// The EDF subset this project needs: 256-byte fixed header, 256 bytes of
// header per signal, contiguous records of 16-bit little-endian samples.
// No EDF+ annotations, no discontinuous records.
struct EdfSignalInfo {
  std::string label;
  long samples_per_record = 0;
  double phys_min = 0.0, phys_max = 0.0;
  long dig_min = 0, dig_max = 0;
};

struct EdfHeaderSubset {
  long record_count = 0;
  double record_duration_s = 0.0;
  int signal_count = 0;
  std::vector<EdfSignalInfo> signals;
};

EdfHeaderSubset read_edf_header(const std::string& path);

// Extracts one channel: samples concatenated across records and mapped
// digital -> physical through the affine (digMin,digMax) -> (physMin,physMax)
// scaling; fs = samples_per_record / record_duration. Truncated files raise
// IoError; an unknown channel raises DatasetError listing the real labels.
SignalRecord read_edf(const std::string& path, const std::string& channel);

}  // namespace mtcnn
