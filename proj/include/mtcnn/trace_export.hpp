#pragma once

#include <string>

#include "mtcnn/model.hpp"
#include "mtcnn/types.hpp"

namespace mtcnn {

void write_matrix_csv(const std::string& path, const Matrix& m);

// Binary PGM (P5), maxval 255, width = cols, height = rows; values scaled
// min -> 0, max -> 255 per file. A constant map renders black.
void write_matrix_pgm(const std::string& path, const Matrix& m);

// One CSV + PGM pair per captured feature map, named activation_<layer>.*.
void export_trace(const std::string& dir, const ActivationTrace& trace);

// Parameter buffers as weights_<name>.* — kept separate from activations.
void export_weights(const std::string& dir, const Model& model);

}  // namespace mtcnn
