#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtcnn/signal.hpp"

namespace mtcnn {

// Trials are the unit of assignment: every window of a trial follows its
// trial into exactly one partition.
struct TrialRef {
  std::string trial_id;
  std::string subject_id;
  TaskLabel label = TaskLabel::BT;
};

struct FoldAssignment {
  std::vector<std::string> train;       // trial ids
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

struct FoldPlan {
  int fold_count = 10;
  std::vector<FoldAssignment> folds;
  std::vector<std::string> warnings;  // best-effort notes (tiny classes etc.)
};

struct FoldOptions {
  int fold_count = 10;   // 10 folds give the 80/10/10 split
  bool stratify = true;  // chunk each class separately
  // Assign whole subjects instead of whole trials (leave-subjects-out);
  // stratification is ignored in this mode.
  bool group_by_subject = false;
};

// Rotating k-fold plan: the shuffled trial list of each stratum is cut into
// k nearly equal chunks; fold k tests on chunk k, validates on chunk k+1 and
// trains on the rest. Test sets across folds are disjoint and cover the set.
// Deterministic under (trials, seed, options).
FoldPlan make_folds(const std::vector<TrialRef>& trials, std::uint64_t seed,
                    const FoldOptions& options = {});

}  // namespace mtcnn
