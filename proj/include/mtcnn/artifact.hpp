#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mtcnn/rng.hpp"
#include "mtcnn/signal.hpp"
#include "mtcnn/types.hpp"

namespace mtcnn {

enum class ArtifactKind { Ocular, Muscle };
enum class ContaminationMode { OA, MA, OAMA };

ContaminationMode parse_contamination_mode(const std::string& text);  // oa | ma | oamma
const char* to_string(ContaminationMode mode);

// A prepared artifact recording (ocular or muscle), resampled to the window
// rate before use.
struct ArtifactSource {
  std::string id;
  Vector samples;
  ArtifactKind kind = ArtifactKind::Ocular;
  double fs = 0.0;
};

struct ContaminationParams {
  double lambda = 0.0;  // ocular contribution
  double beta = 0.0;    // muscle contribution
  ContaminationMode mode = ContaminationMode::OA;
};

// Root mean square. Throws InvalidArgumentError on an empty sequence.
double rms(const Vector& x);

// Amplitude SNR: rms(clean) / rms(scaled_noise). Not a power ratio, not dB.
// Throws UndefinedSnrError when the noise is identically zero.
double snr_of(const Vector& clean, const Vector& scaled_noise);

// One contaminated realization plus its provenance.
struct Contamination {
  Window window;              // clean identity (subject/trial/offset) retained
  std::string oa_id, ma_id;   // empty when the mode leaves that source unused
  std::int64_t oa_offset = -1;
  std::int64_t ma_offset = -1;
  double lambda = 0.0;
  double beta = 0.0;
  std::optional<double> snr;  // empty when the scaled noise is identically zero
};

// Adds lambda * oa-slice and/or beta * ma-slice to the clean window, with
// slice offsets drawn uniformly from the valid range (OA first, then MA).
// Sources irrelevant to the mode may be null; required sources must be at
// least as long as the window (ShapeError otherwise).
Contamination contaminate(const Window& clean, const ArtifactSource* oa,
                          const ArtifactSource* ma, const ContaminationParams& params,
                          SeededGenerator& gen);

}  // namespace mtcnn
