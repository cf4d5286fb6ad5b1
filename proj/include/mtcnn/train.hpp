#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mtcnn/adam.hpp"
#include "mtcnn/archive.hpp"
#include "mtcnn/folds.hpp"
#include "mtcnn/metrics.hpp"
#include "mtcnn/model.hpp"
#include "mtcnn/types.hpp"

namespace mtcnn {

// Windows ready for the network: one column per window.
struct Dataset {
  Matrix windows;                        // window_len x count
  std::vector<int> labels;               // class indices, aligned to columns
  std::vector<std::string> window_ids;   // optional provenance
  std::vector<std::string> trial_ids;
  std::vector<std::string> subject_ids;

  Eigen::Index count() const { return windows.cols(); }
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  // Empty when no validation windows were supplied.
  std::optional<double> val_loss;
  std::optional<double> val_accuracy;
};

struct TrainOptions {
  int epochs = 20;
  int batch_size = 50;
  double lr = 0.001;
  std::uint64_t seed = 0;
};

struct TrainResult {
  Model model;
  std::vector<EpochStats> stats;
};

// Mini-batch Adam training: batch order reshuffled per epoch from the seed,
// one inverted-dropout mask per batch, gradients averaged over the batch in
// a fixed order. Training stats come from the forward passes used for the
// updates; validation runs in inference mode after each epoch.
TrainResult train_model(const ModelConfig& config, const Dataset& train, const Dataset& val,
                        const TrainOptions& options);

// Inference-mode evaluation. Binary: probability >= 0.5 predicts class 1.
// Multi-class: argmax (ties resolve to the lowest index).
EvalReport evaluate(const Model& model, const Dataset& data);

// Per-window loss for the model's head; label is a class index.
double loss_for(const Model& model, const Vector& probs, int label);
int predict_class(const Model& model, const Vector& probs);

// Distinct labels present in an archive, in canonical vocabulary order;
// position = class index, so BT is the negative class whenever present.
std::vector<TaskLabel> classes_present(const WindowArchive& archive);

// Trials found in an archive. The fold key is subject:trial, so trial ids
// only need to be unique within a subject. A trial carrying two labels is a
// DatasetError.
std::vector<TrialRef> trials_of(const WindowArchive& archive);

// The windows whose subject:trial key is in the given set — windows always
// inherit their trial's partition. Labels map to indices in `classes`.
Dataset select_by_trials(const WindowArchive& archive, const std::vector<TaskLabel>& classes,
                         const std::set<std::string>& trial_keys);

}  // namespace mtcnn
