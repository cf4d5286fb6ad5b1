#pragma once

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace mtcnn {

// Exit status contract: 0 success, 2 dataset errors, 3 configuration
// errors, 4 I/O errors, 1 anything else (including CLI parse errors).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDataset = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitIo = 4;

struct PreprocessOptions {
  std::string manifest;
  std::string out;
  double fs_target = 500.0;
  double window_seconds = 10.0;
  double overlap_seconds = 0.0;
  bool zscore = false;
};

struct ContaminateOptions {
  std::string archive;
  std::string artifacts;  // artifact manifest path
  std::string out;
  std::vector<double> lambdas{1.0};
  std::vector<double> betas{1.0};
  std::string mode = "oamma";
  std::uint64_t seed = 0;
};

struct TrainCliOptions {
  std::string archive;
  std::string out;
  std::vector<int> depths{2};
  int classes = 0;  // 0 = infer from the archive
  std::string head; // empty = sigmoid for 2 classes, softmax otherwise
  std::uint64_t seed = 0;
  int folds = 10;
  bool stratify = true;
  bool dense_bias = false;
};

struct EvalOptions {
  std::string checkpoint;
  std::string archive;
  std::string out;
};

struct ExportOptions {
  std::string checkpoint;
  std::string archive;
  std::string window_id;
  std::string out;
};

void cmd_preprocess(const PreprocessOptions& options, std::ostream& out);
void cmd_contaminate(const ContaminateOptions& options, std::ostream& out);
void cmd_train(const TrainCliOptions& options, std::ostream& out);
void cmd_eval(const EvalOptions& options, std::ostream& out);
void cmd_export_activations(const ExportOptions& options, std::ostream& out);

// Parses args (without the program name) and dispatches; returns the exit
// status. All command output goes to the given streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace mtcnn
