#pragma once

#include <vector>

#include "mtcnn/signal.hpp"
#include "mtcnn/types.hpp"

namespace mtcnn {

// Cubic-spline resampling to fs_target. Knots sit at i / fs with both time
// bases anchored at t = 0; output length is round(len * fs_target / fs).
// Throws InvalidArgumentError for records shorter than 4 samples.
SignalRecord resample_cubic(const SignalRecord& record, double fs_target);

// Cuts maximal full windows of round(fs * duration_s) samples with stride
// (window - overlap) samples; trailing partial data is discarded. A record
// shorter than one window yields an empty sequence.
std::vector<Window> segment(const SignalRecord& record, double duration_s, double overlap_s);

// Per-window z-score: (x - mean) / std. A constant window maps to zeros.
Vector zscore(const Vector& x);

}  // namespace mtcnn
