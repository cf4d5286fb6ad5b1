#pragma once

#include <string>
#include <vector>

#include "mtcnn/artifact.hpp"
#include "mtcnn/signal.hpp"

namespace mtcnn {

// Shortest round-trip decimal form (std::to_chars); the one float format
// used in every CSV this project writes, so reruns are byte-identical.
std::string format_double(double value);

// Strict float parsing: the whole token must be a C-locale float. Rejects
// locale decimals like "1,5" and trailing junk.
double parse_strict_double(const std::string& token, const std::string& context);

struct CsvSignalSpec {
  bool has_header = false;
  bool time_value_pairs = false;  // two columns: time, value
};

// Reads a signal stored one sample per line (or time,value per line).
// The sampling rate comes from the manifest, not the file.
// Unparsable lines raise ParseError with the line number; an empty file
// raises DatasetError.
SignalRecord read_csv_signal(const std::string& path, const CsvSignalSpec& spec, double fs);

// One row of a dataset manifest. Format tags: csv, csv-header, csv2,
// csv2-header (two-column time,value), edf. Relative paths are resolved
// against the manifest's directory.
struct ManifestRow {
  std::string path;
  std::string format;
  std::string channel;
  double fs = 0.0;
  std::string label;  // task tag, or OA/MA for artifact manifests
  std::string subject_id;
  std::string trial_id;
};

// Seven comma-separated columns, UTF-8, first row must be the header
// path,format,channel,fs,label,subject,trial.
std::vector<ManifestRow> read_manifest(const std::string& path);

// Loads a manifest row as a labeled EEG trial (label must be in the task
// vocabulary).
SignalRecord load_task_signal(const ManifestRow& row);

// Loads a manifest row as an artifact recording (label must be OA or MA);
// the row's trial column becomes the artifact id.
ArtifactSource load_artifact_signal(const ManifestRow& row);

}  // namespace mtcnn
