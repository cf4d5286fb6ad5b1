#pragma once

#include <stdexcept>
#include <string>

namespace mtcnn {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgumentError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct StateError : Error { using Error::Error; };
struct UndefinedSnrError : Error { using Error::Error; };

// Dataset content is unusable: bad labels, empty files, inconsistent rows.
struct DatasetError : Error { using Error::Error; };
// Line-oriented file failed to parse; the message carries the line number.
struct ParseError : DatasetError { using DatasetError::DatasetError; };
// Run configuration is inconsistent (flags, checkpoint/archive mismatch).
struct ConfigError : Error { using Error::Error; };
// Byte-level I/O problems: missing files, truncation, corruption.
struct IoError : Error { using Error::Error; };

}  // namespace mtcnn
