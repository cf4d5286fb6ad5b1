// Regenerates the bundled fixture signals under data/fixtures: small
// synthetic EEG-like trials (BT: 8 Hz dominant, ST: 25 Hz dominant) plus one
// ocular-style and one muscle-style artifact recording, all rms-matched so a
// lambda/beta sweep covers a wide SNR range. Outputs are deterministic.
//
//   make_fixtures <output-dir>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "mtcnn/artifact.hpp"
#include "mtcnn/rng.hpp"
#include "mtcnn/types.hpp"

namespace {

using mtcnn::SeededGenerator;
using mtcnn::Vector;

constexpr double kTargetRms = 1.0;

Vector scaled_to_rms(Vector x, double target) {
  return x * (target / mtcnn::rms(x));
}

// Band-limited pseudo-EEG: a dominant tone plus two weak side tones and
// uniform noise.
Vector eeg_like(double fs, double seconds, double dominant_hz, SeededGenerator& gen) {
  const auto n = static_cast<Eigen::Index>(std::llround(fs * seconds));
  Vector x(n);
  const double phase = gen.next_double() * 2.0 * std::numbers::pi;
  const double phase2 = gen.next_double() * 2.0 * std::numbers::pi;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    x[i] = std::sin(2.0 * std::numbers::pi * dominant_hz * t + phase) +
           0.25 * std::sin(2.0 * std::numbers::pi * (dominant_hz * 0.5) * t + phase2) +
           0.15 * std::sin(2.0 * std::numbers::pi * (dominant_hz * 2.1) * t) +
           0.3 * (2.0 * gen.next_double() - 1.0);
  }
  return scaled_to_rms(std::move(x), kTargetRms);
}

// Blink-like bumps: raised cosines ~300 ms wide at random instants.
Vector ocular_like(double fs, double seconds, SeededGenerator& gen) {
  const auto n = static_cast<Eigen::Index>(std::llround(fs * seconds));
  Vector x = Vector::Zero(n);
  const auto width = static_cast<Eigen::Index>(0.3 * fs);
  const int bumps = static_cast<int>(seconds * 1.2);
  for (int b = 0; b < bumps; ++b) {
    const auto start = static_cast<Eigen::Index>(gen.next_below(static_cast<std::uint64_t>(n - width)));
    const double amp = 2.0 + 2.0 * gen.next_double();
    for (Eigen::Index i = 0; i < width; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(width - 1);
      x[start + i] += amp * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * u));
    }
  }
  return scaled_to_rms(std::move(x), kTargetRms);
}

// Muscle-like activity: high-frequency tones gated by random bursts.
Vector muscle_like(double fs, double seconds, SeededGenerator& gen) {
  const auto n = static_cast<Eigen::Index>(std::llround(fs * seconds));
  Vector x(n);
  double gate = 0.2;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i % static_cast<Eigen::Index>(fs / 4) == 0) gate = gen.next_double() < 0.5 ? 0.15 : 1.0;
    const double t = static_cast<double>(i) / fs;
    x[i] = gate * (std::sin(2.0 * std::numbers::pi * 55.0 * t) +
                   0.8 * std::sin(2.0 * std::numbers::pi * 90.0 * t) +
                   0.6 * (2.0 * gen.next_double() - 1.0));
  }
  return scaled_to_rms(std::move(x), kTargetRms);
}

void write_csv(const std::filesystem::path& path, const Vector& x) {
  std::ofstream out(path, std::ios::binary);
  char buf[32];
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g\n", x[i]);
    out << buf;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output-dir>\n";
    return 1;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);

  const double fs_clean = 250.0;  // resampled by the pipeline, like real data
  const double fs_artifact = 500.0;
  const double trial_seconds = 16.0;

  std::ofstream manifest(dir / "manifest.csv", std::ios::binary);
  manifest << "path,format,channel,fs,label,subject,trial\n";
  SeededGenerator gen(20240001);
  const char* subjects[] = {"s01", "s02", "s03"};
  for (const char* subject : subjects) {
    for (int trial = 0; trial < 2; ++trial) {
      for (const char* task : {"BT", "ST"}) {
        const double dominant = std::string(task) == "BT" ? 8.0 : 25.0;
        const std::string name = std::string(subject) + "_" + task + "_t" +
                                 std::to_string(trial + 1) + ".csv";
        write_csv(dir / name, eeg_like(fs_clean, trial_seconds, dominant, gen));
        manifest << name << ",csv,FP1,250," << task << ',' << subject << ",t"
                 << (trial + 1) << '_' << task << "\n";
      }
    }
  }
  manifest.close();

  std::ofstream artifacts(dir / "artifacts.csv", std::ios::binary);
  artifacts << "path,format,channel,fs,label,subject,trial\n";
  write_csv(dir / "artifact_oa.csv", ocular_like(fs_artifact, 12.0, gen));
  write_csv(dir / "artifact_ma.csv", muscle_like(fs_artifact, 12.0, gen));
  artifacts << "artifact_oa.csv,csv,EOG,500,OA,,oa1\n";
  artifacts << "artifact_ma.csv,csv,EMG,500,MA,,ma1\n";
  artifacts.close();

  std::cout << "fixtures written to " << dir << "\n";
  return 0;
}
