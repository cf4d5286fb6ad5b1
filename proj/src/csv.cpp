#include "mtcnn/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "mtcnn/edf.hpp"
#include "mtcnn/errors.hpp"

namespace mtcnn {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    const auto piece = comma == std::string::npos ? line.substr(start)
                                                  : line.substr(start, comma - start);
    fields.emplace_back(trim(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

double parse_strict_double(const std::string& token, const std::string& context) {
  const std::string_view t = trim(token);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
    throw ParseError(context + ": cannot parse '" + token + "' as a number");
  return value;
}

SignalRecord read_csv_signal(const std::string& path, const CsvSignalSpec& spec, double fs) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::vector<double> samples;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && spec.has_header) continue;
    const std::string context = path + ":" + std::to_string(line_no);
    if (spec.time_value_pairs) {
      const auto fields = split_fields(line);
      if (fields.size() != 2)
        throw ParseError(context + ": expected time,value but got " +
                         std::to_string(fields.size()) + " fields");
      parse_strict_double(fields[0], context);  // timestamps validated, then dropped
      samples.push_back(parse_strict_double(fields[1], context));
    } else {
      samples.push_back(parse_strict_double(line, context));
    }
  }
  if (samples.empty()) throw DatasetError("'" + path + "' holds no samples");

  SignalRecord record;
  record.samples = Eigen::Map<const Vector>(samples.data(), static_cast<Eigen::Index>(samples.size()));
  record.fs = fs;
  return record;
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path + "'");
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::string line;
  if (!std::getline(in, line)) throw DatasetError("manifest '" + path + "' is empty");
  const auto header = split_fields(line);
  const std::vector<std::string> expected = {"path", "format", "channel", "fs",
                                             "label", "subject", "trial"};
  if (header != expected)
    throw ParseError(path + ":1: manifest header must be path,format,channel,fs,label,subject,trial");

  std::vector<ManifestRow> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string context = path + ":" + std::to_string(line_no);
    const auto fields = split_fields(line);
    if (fields.size() != expected.size())
      throw ParseError(context + ": expected 7 fields, got " + std::to_string(fields.size()));

    ManifestRow row;
    std::filesystem::path file(fields[0]);
    row.path = file.is_absolute() ? file.string() : (base / file).string();
    row.format = fields[1];
    row.channel = fields[2];
    row.fs = parse_strict_double(fields[3], context);
    row.label = fields[4];
    row.subject_id = fields[5];
    row.trial_id = fields[6];
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DatasetError("manifest '" + path + "' lists no records");
  return rows;
}

namespace {

SignalRecord read_row_samples(const ManifestRow& row) {
  CsvSignalSpec spec;
  if (row.format == "edf") {
    return read_edf(row.path, row.channel);
  } else if (row.format == "csv") {
  } else if (row.format == "csv-header") {
    spec.has_header = true;
  } else if (row.format == "csv2") {
    spec.time_value_pairs = true;
  } else if (row.format == "csv2-header") {
    spec.has_header = true;
    spec.time_value_pairs = true;
  } else {
    throw DatasetError("unknown manifest format tag '" + row.format + "'");
  }
  if (!(row.fs > 0.0))
    throw DatasetError("'" + row.path + "': manifest fs must be positive for csv formats");
  return read_csv_signal(row.path, spec, row.fs);
}

}  // namespace

SignalRecord load_task_signal(const ManifestRow& row) {
  SignalRecord record = read_row_samples(row);
  record.label = parse_task_label(row.label);
  record.subject_id = row.subject_id;
  record.trial_id = row.trial_id;
  if (record.channel.empty()) record.channel = row.channel;
  return record;
}

ArtifactSource load_artifact_signal(const ManifestRow& row) {
  ArtifactSource source;
  if (row.label == "OA")
    source.kind = ArtifactKind::Ocular;
  else if (row.label == "MA")
    source.kind = ArtifactKind::Muscle;
  else
    throw DatasetError("artifact label must be OA or MA, got '" + row.label + "'");

  const SignalRecord record = read_row_samples(row);
  source.samples = record.samples;
  source.fs = record.fs;
  source.id = row.trial_id.empty()
                  ? std::filesystem::path(row.path).stem().string()
                  : row.trial_id;
  return source;
}

}  // namespace mtcnn
