#pragma once

#include <cstdint>
#include <string>

#include "mtcnn/types.hpp"

namespace mtcnn {

// Closed task vocabulary: baseline, multiplication, letter composing, figure
// rotation, visual counting, serial subtraction. BT is the non-mental task
// and sorts first, so it always takes class index 0 (the negative class).
enum class TaskLabel { BT, MT, LT, RT, VT, ST };

TaskLabel parse_task_label(const std::string& text);
const char* to_string(TaskLabel label);
// Position in the canonical BT,MT,LT,RT,VT,ST ordering.
int vocabulary_rank(TaskLabel label);

// One labeled single-channel trial as recorded (or resampled).
struct SignalRecord {
  Vector samples;  // microvolts
  double fs = 0.0;
  TaskLabel label = TaskLabel::BT;
  std::string subject_id;
  std::string trial_id;
  std::string channel;
};

// Fixed-length segment of a record; the unit the network consumes.
struct Window {
  Vector samples;
  TaskLabel label = TaskLabel::BT;
  std::string subject_id;
  std::string trial_id;
  std::int64_t offset = 0;  // first-sample index within the source record
};

}  // namespace mtcnn
