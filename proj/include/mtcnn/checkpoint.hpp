#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtcnn/model.hpp"
#include "mtcnn/types.hpp"

namespace mtcnn {

// Binary model snapshot. Layout (all integers and floats little-endian,
// documented field by field in docs/file-formats.md):
//   magic "MTCNN1", u32 version, config block, u64 seed,
//   u32 buffer count, then per buffer a u64 element count and the raw
//   float64 payload in column-major order.
struct ModelCheckpoint {
  std::uint32_t version = 1;
  ModelConfig config;
  std::uint64_t seed = 0;
  std::vector<Vector> buffers;  // flattened parameters in declared order
};

void write_checkpoint(const std::string& path, const ModelCheckpoint& checkpoint);
// Throws IoError on bad magic, unsupported version, truncation or length
// prefixes that disagree with the config.
ModelCheckpoint read_checkpoint(const std::string& path);

ModelCheckpoint checkpoint_from_model(const Model& model);
Model model_from_checkpoint(const ModelCheckpoint& checkpoint);

}  // namespace mtcnn
