#include "mtcnn/signal.hpp"

#include "mtcnn/errors.hpp"

namespace mtcnn {

TaskLabel parse_task_label(const std::string& text) {
  if (text == "BT") return TaskLabel::BT;
  if (text == "MT") return TaskLabel::MT;
  if (text == "LT") return TaskLabel::LT;
  if (text == "RT") return TaskLabel::RT;
  if (text == "VT") return TaskLabel::VT;
  if (text == "ST") return TaskLabel::ST;
  throw DatasetError("unknown task label '" + text + "' (expected BT/MT/LT/RT/VT/ST)");
}

const char* to_string(TaskLabel label) {
  switch (label) {
    case TaskLabel::BT: return "BT";
    case TaskLabel::MT: return "MT";
    case TaskLabel::LT: return "LT";
    case TaskLabel::RT: return "RT";
    case TaskLabel::VT: return "VT";
    case TaskLabel::ST: return "ST";
  }
  return "??";
}

int vocabulary_rank(TaskLabel label) { return static_cast<int>(label); }

}  // namespace mtcnn
