#include "mtcnn/edf.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>

#include "mtcnn/errors.hpp"

namespace mtcnn {
namespace {

constexpr std::size_t kFixedHeaderBytes = 256;
constexpr std::size_t kPerSignalHeaderBytes = 256;

std::string trim_ascii(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && s[begin] == ' ') ++begin;
  while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\0')) --end;
  return s.substr(begin, end - begin);
}

struct HeaderReader {
  const std::string& bytes;
  const std::string& path;
  std::size_t pos = 0;

  std::string field(std::size_t width) {
    if (pos + width > bytes.size())
      throw IoError("'" + path + "': truncated EDF header");
    std::string raw = bytes.substr(pos, width);
    pos += width;
    return trim_ascii(raw);
  }

  long integer(std::size_t width, const char* what) {
    const std::string text = field(width);
    long value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      throw DatasetError("'" + path + "': bad EDF " + std::string(what) + " field '" + text + "'");
    return value;
  }

  double real(std::size_t width, const char* what) {
    const std::string text = field(width);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      throw DatasetError("'" + path + "': bad EDF " + std::string(what) + " field '" + text + "'");
    return value;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

EdfHeaderSubset parse_header(const std::string& bytes, const std::string& path) {
  if (bytes.size() < kFixedHeaderBytes) throw IoError("'" + path + "': truncated EDF header");

  HeaderReader reader{bytes, path};
  reader.field(8);    // version
  reader.field(80);   // patient
  reader.field(80);   // recording
  reader.field(8);    // start date
  reader.field(8);    // start time
  reader.integer(8, "header-bytes");
  reader.field(44);   // reserved
  const long record_count = reader.integer(8, "record-count");
  const double duration = reader.real(8, "record-duration");
  const long ns = reader.integer(4, "signal-count");
  if (ns < 1) throw DatasetError("'" + path + "': EDF file declares no signals");
  if (!(duration > 0.0))
    throw DatasetError("'" + path + "': EDF record duration must be positive");

  const std::size_t header_total = kFixedHeaderBytes + static_cast<std::size_t>(ns) * kPerSignalHeaderBytes;
  if (bytes.size() < header_total) throw IoError("'" + path + "': truncated EDF header");

  EdfHeaderSubset header;
  header.record_count = record_count;
  header.record_duration_s = duration;
  header.signal_count = static_cast<int>(ns);
  header.signals.resize(static_cast<std::size_t>(ns));

  // Per-signal header arrays are stored field-major: all labels, then all
  // transducers, and so on.
  for (auto& sig : header.signals) sig.label = reader.field(16);
  for (long i = 0; i < ns; ++i) reader.field(80);  // transducer
  for (long i = 0; i < ns; ++i) reader.field(8);   // physical dimension
  for (auto& sig : header.signals) sig.phys_min = reader.real(8, "physical-min");
  for (auto& sig : header.signals) sig.phys_max = reader.real(8, "physical-max");
  for (auto& sig : header.signals) sig.dig_min = reader.integer(8, "digital-min");
  for (auto& sig : header.signals) sig.dig_max = reader.integer(8, "digital-max");
  for (long i = 0; i < ns; ++i) reader.field(80);  // prefiltering
  for (auto& sig : header.signals) sig.samples_per_record = reader.integer(8, "samples-per-record");
  for (long i = 0; i < ns; ++i) reader.field(32);  // reserved

  for (const auto& sig : header.signals) {
    if (sig.samples_per_record < 1)
      throw DatasetError("'" + path + "': EDF signal '" + sig.label +
                         "' has no samples per record");
    if (sig.dig_max <= sig.dig_min)
      throw DatasetError("'" + path + "': EDF signal '" + sig.label +
                         "' has digital max <= digital min");
  }
  return header;
}

}  // namespace

EdfHeaderSubset read_edf_header(const std::string& path) {
  return parse_header(read_file(path), path);
}

SignalRecord read_edf(const std::string& path, const std::string& channel) {
  const std::string bytes = read_file(path);
  EdfHeaderSubset header = parse_header(bytes, path);

  long target = -1;
  for (std::size_t i = 0; i < header.signals.size(); ++i)
    if (header.signals[i].label == channel) {
      target = static_cast<long>(i);
      break;
    }
  if (target < 0) {
    std::string available;
    for (const auto& sig : header.signals) {
      if (!available.empty()) available += ", ";
      available += "'" + sig.label + "'";
    }
    throw DatasetError("'" + path + "': no channel '" + channel +
                       "'; available channels: " + available);
  }

  std::size_t record_bytes = 0;
  std::size_t channel_offset = 0;
  for (std::size_t i = 0; i < header.signals.size(); ++i) {
    if (static_cast<long>(i) == target) channel_offset = record_bytes;
    record_bytes += static_cast<std::size_t>(header.signals[i].samples_per_record) * 2;
  }

  const std::size_t header_total =
      kFixedHeaderBytes + header.signals.size() * kPerSignalHeaderBytes;
  long record_count = header.record_count;
  if (record_count < 0) {
    // -1 means "unknown" in the wild; derive from the file size.
    record_count = static_cast<long>((bytes.size() - header_total) / record_bytes);
  }
  if (bytes.size() < header_total + static_cast<std::size_t>(record_count) * record_bytes)
    throw IoError("'" + path + "': truncated EDF data (" + std::to_string(bytes.size()) +
                  " bytes, need " +
                  std::to_string(header_total + static_cast<std::size_t>(record_count) * record_bytes) +
                  ")");

  const EdfSignalInfo& sig = header.signals[static_cast<std::size_t>(target)];
  const double scale = (sig.phys_max - sig.phys_min) /
                       static_cast<double>(sig.dig_max - sig.dig_min);

  SignalRecord record;
  record.channel = sig.label;
  record.fs = static_cast<double>(sig.samples_per_record) / header.record_duration_s;
  record.samples.resize(record_count * sig.samples_per_record);

  Eigen::Index out = 0;
  for (long r = 0; r < record_count; ++r) {
    const std::size_t base = header_total + static_cast<std::size_t>(r) * record_bytes + channel_offset;
    for (long s = 0; s < sig.samples_per_record; ++s) {
      const auto lo = static_cast<std::uint8_t>(bytes[base + 2 * static_cast<std::size_t>(s)]);
      const auto hi = static_cast<std::uint8_t>(bytes[base + 2 * static_cast<std::size_t>(s) + 1]);
      const auto digital = static_cast<std::int16_t>(static_cast<std::uint16_t>(lo) |
                                                     (static_cast<std::uint16_t>(hi) << 8));
      record.samples[out++] =
          sig.phys_min + (static_cast<double>(digital) - static_cast<double>(sig.dig_min)) * scale;
    }
  }
  return record;
}

}  // namespace mtcnn
