#include "mtcnn/artifact.hpp"

#include <cmath>

#include "mtcnn/errors.hpp"

namespace mtcnn {

ContaminationMode parse_contamination_mode(const std::string& text) {
  if (text == "oa") return ContaminationMode::OA;
  if (text == "ma") return ContaminationMode::MA;
  if (text == "oamma") return ContaminationMode::OAMA;
  throw ConfigError("unknown contamination mode '" + text + "' (expected oa/ma/oamma)");
}

const char* to_string(ContaminationMode mode) {
  switch (mode) {
    case ContaminationMode::OA: return "oa";
    case ContaminationMode::MA: return "ma";
    case ContaminationMode::OAMA: return "oamma";
  }
  return "??";
}

double rms(const Vector& x) {
  if (x.size() == 0) throw InvalidArgumentError("rms: empty sequence");
  return std::sqrt(x.array().square().mean());
}

double snr_of(const Vector& clean, const Vector& scaled_noise) {
  if (clean.size() != scaled_noise.size())
    throw ShapeError("snr_of: length mismatch " + std::to_string(clean.size()) + " vs " +
                     std::to_string(scaled_noise.size()));
  const double noise_rms = rms(scaled_noise);
  if (noise_rms == 0.0) throw UndefinedSnrError("snr_of: noise is identically zero");
  return rms(clean) / noise_rms;
}

namespace {

Vector take_slice(const ArtifactSource& source, Eigen::Index window_len, SeededGenerator& gen,
                  std::int64_t& offset_out) {
  if (source.samples.size() < window_len)
    throw ShapeError("contaminate: artifact '" + source.id + "' shorter than window (" +
                     std::to_string(source.samples.size()) + " < " +
                     std::to_string(window_len) + ")");
  const auto range = static_cast<std::uint64_t>(source.samples.size() - window_len + 1);
  const auto offset = static_cast<Eigen::Index>(gen.next_below(range));
  offset_out = static_cast<std::int64_t>(offset);
  return source.samples.segment(offset, window_len);
}

}  // namespace

Contamination contaminate(const Window& clean, const ArtifactSource* oa,
                          const ArtifactSource* ma, const ContaminationParams& params,
                          SeededGenerator& gen) {
  const Eigen::Index n = clean.samples.size();
  if (n == 0) throw InvalidArgumentError("contaminate: empty clean window");
  const bool use_oa = params.mode != ContaminationMode::MA;
  const bool use_ma = params.mode != ContaminationMode::OA;
  if (use_oa && oa == nullptr)
    throw InvalidArgumentError("contaminate: mode requires an ocular source");
  if (use_ma && ma == nullptr)
    throw InvalidArgumentError("contaminate: mode requires a muscle source");

  Contamination result;
  result.window = clean;
  Vector noise = Vector::Zero(n);
  if (use_oa) {
    const Vector slice = take_slice(*oa, n, gen, result.oa_offset);
    noise += params.lambda * slice;
    result.oa_id = oa->id;
    result.lambda = params.lambda;
  }
  if (use_ma) {
    const Vector slice = take_slice(*ma, n, gen, result.ma_offset);
    noise += params.beta * slice;
    result.ma_id = ma->id;
    result.beta = params.beta;
  }

  result.window.samples = clean.samples + noise;
  if (rms(noise) > 0.0) result.snr = snr_of(clean.samples, noise);
  return result;
}

}  // namespace mtcnn
