#include "mtcnn/prep.hpp"

#include <cmath>

#include "mtcnn/errors.hpp"
#include "mtcnn/spline.hpp"

namespace mtcnn {

SignalRecord resample_cubic(const SignalRecord& record, double fs_target) {
  if (record.samples.size() < 4)
    throw InvalidArgumentError("resample_cubic: record too short (" +
                               std::to_string(record.samples.size()) + " samples, need >= 4)");
  if (!(record.fs > 0.0)) throw InvalidArgumentError("resample_cubic: source rate must be positive");
  if (!(fs_target > 0.0)) throw InvalidArgumentError("resample_cubic: target rate must be positive");

  const Eigen::Index n_in = record.samples.size();
  const auto n_out = static_cast<Eigen::Index>(
      std::llround(static_cast<double>(n_in) * fs_target / record.fs));

  const CubicSpline spline(record.samples, 1.0 / record.fs);
  SignalRecord out = record;
  out.fs = fs_target;
  out.samples.resize(n_out);
  for (Eigen::Index j = 0; j < n_out; ++j)
    out.samples[j] = spline(static_cast<double>(j) / fs_target);
  return out;
}

std::vector<Window> segment(const SignalRecord& record, double duration_s, double overlap_s) {
  if (!(record.fs > 0.0)) throw InvalidArgumentError("segment: record rate must be positive");
  if (!(duration_s > 0.0)) throw InvalidArgumentError("segment: duration must be positive");
  if (overlap_s < 0.0 || overlap_s >= duration_s)
    throw InvalidArgumentError("segment: overlap must satisfy 0 <= overlap < duration");

  const auto window_len = static_cast<Eigen::Index>(std::llround(record.fs * duration_s));
  const auto overlap_len = static_cast<Eigen::Index>(std::llround(record.fs * overlap_s));
  const Eigen::Index stride = window_len - overlap_len;
  if (stride < 1) throw InvalidArgumentError("segment: stride rounds to zero samples");

  std::vector<Window> windows;
  const Eigen::Index len = record.samples.size();
  if (len < window_len) return windows;

  const Eigen::Index count = (len - window_len) / stride + 1;
  windows.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index k = 0; k < count; ++k) {
    Window w;
    w.samples = record.samples.segment(k * stride, window_len);
    w.label = record.label;
    w.subject_id = record.subject_id;
    w.trial_id = record.trial_id;
    w.offset = static_cast<std::int64_t>(k * stride);
    windows.push_back(std::move(w));
  }
  return windows;
}

Vector zscore(const Vector& x) {
  if (x.size() == 0) throw InvalidArgumentError("zscore: empty window");
  const double mean = x.mean();
  const double var = (x.array() - mean).square().mean();
  const double sd = std::sqrt(var);
  if (sd < 1e-15) return Vector::Zero(x.size());
  return (x.array() - mean) / sd;
}

}  // namespace mtcnn
