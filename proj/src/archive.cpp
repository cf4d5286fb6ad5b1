#include "mtcnn/archive.hpp"

#include <bit>
#include <filesystem>
#include <fstream>
#include <set>

#include "mtcnn/csv.hpp"
#include "mtcnn/errors.hpp"

namespace mtcnn {
namespace {

const char* kIndexHeader =
    "id,subject,trial,label,fs,window_len,offset,"
    "clean_id,oa_id,oa_offset,ma_id,ma_offset,lambda,beta,snr";

}  // namespace

Eigen::Index WindowArchive::find(const std::string& id) const {
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].id == id) return static_cast<Eigen::Index>(i);
  return -1;
}

void write_archive(const std::string& dir, const WindowArchive& archive) {
  if (archive.samples.cols() != static_cast<Eigen::Index>(archive.entries.size()))
    throw ShapeError("archive: entry count does not match sample columns");
  if (archive.samples.rows() != archive.window_len)
    throw ShapeError("archive: sample rows do not match window_len");

  std::filesystem::create_directories(dir);
  const auto index_path = (std::filesystem::path(dir) / "index.csv").string();
  const auto bin_path = (std::filesystem::path(dir) / "samples.bin").string();

  std::ofstream index(index_path, std::ios::binary);  // binary: no CRLF translation
  if (!index) throw IoError("cannot write '" + index_path + "'");
  index << kIndexHeader << '\n';
  for (const auto& e : archive.entries) {
    index << e.id << ',' << e.subject_id << ',' << e.trial_id << ',' << to_string(e.label)
          << ',' << format_double(archive.fs) << ',' << archive.window_len << ',' << e.offset;
    if (e.contaminated) {
      index << ',' << e.clean_id << ',' << e.oa_id << ',';
      if (e.oa_offset >= 0) index << e.oa_offset;
      index << ',' << e.ma_id << ',';
      if (e.ma_offset >= 0) index << e.ma_offset;
      index << ',' << format_double(e.lambda) << ',' << format_double(e.beta) << ',';
      index << (e.snr ? format_double(*e.snr) : "inf");
    } else {
      index << ",,,,,,,,";
    }
    index << '\n';
  }
  if (!index) throw IoError("write failed for '" + index_path + "'");
  index.close();

  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw IoError("cannot write '" + bin_path + "'");
  for (Eigen::Index col = 0; col < archive.samples.cols(); ++col) {
    for (Eigen::Index row = 0; row < archive.samples.rows(); ++row) {
      const auto raw = std::bit_cast<std::uint64_t>(archive.samples(row, col));
      char b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((raw >> (8 * i)) & 0xFF);
      bin.write(b, 8);
    }
  }
  if (!bin) throw IoError("write failed for '" + bin_path + "'");
}

WindowArchive read_archive(const std::string& dir) {
  const auto index_path = (std::filesystem::path(dir) / "index.csv").string();
  const auto bin_path = (std::filesystem::path(dir) / "samples.bin").string();

  std::ifstream index(index_path);
  if (!index) throw IoError("cannot open '" + index_path + "'");

  std::string line;
  if (!std::getline(index, line)) throw DatasetError("'" + index_path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kIndexHeader)
    throw ParseError(index_path + ":1: unrecognized archive index header");

  WindowArchive archive;
  std::set<std::string> ids;
  long line_no = 1;
  while (std::getline(index, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string context = index_path + ":" + std::to_string(line_no);

    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      f.push_back(comma == std::string::npos ? line.substr(start)
                                             : line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 15)
      throw ParseError(context + ": expected 15 fields, got " + std::to_string(f.size()));

    ArchiveEntry e;
    e.id = f[0];
    e.subject_id = f[1];
    e.trial_id = f[2];
    e.label = parse_task_label(f[3]);
    const double fs = parse_strict_double(f[4], context);
    const auto window_len =
        static_cast<Eigen::Index>(parse_strict_double(f[5], context));
    e.offset = static_cast<std::int64_t>(parse_strict_double(f[6], context));
    if (!f[7].empty() || !f[8].empty() || !f[10].empty()) {
      e.contaminated = true;
      e.clean_id = f[7];
      e.oa_id = f[8];
      e.oa_offset = f[9].empty() ? -1 : static_cast<std::int64_t>(parse_strict_double(f[9], context));
      e.ma_id = f[10];
      e.ma_offset = f[11].empty() ? -1 : static_cast<std::int64_t>(parse_strict_double(f[11], context));
      e.lambda = parse_strict_double(f[12], context);
      e.beta = parse_strict_double(f[13], context);
      if (f[14] != "inf") e.snr = parse_strict_double(f[14], context);
    }

    if (archive.entries.empty()) {
      archive.fs = fs;
      archive.window_len = window_len;
    } else if (fs != archive.fs || window_len != archive.window_len) {
      throw DatasetError(context + ": archive mixes sampling rates or window lengths");
    }
    if (!ids.insert(e.id).second)
      throw DatasetError(context + ": duplicate window id '" + e.id + "'");
    archive.entries.push_back(std::move(e));
  }
  if (archive.entries.empty()) throw DatasetError("'" + index_path + "' lists no windows");

  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw IoError("cannot open '" + bin_path + "'");
  bin.seekg(0, std::ios::end);
  const auto size = static_cast<std::uint64_t>(bin.tellg());
  bin.seekg(0);
  const std::uint64_t expected = static_cast<std::uint64_t>(archive.entries.size()) *
                                 static_cast<std::uint64_t>(archive.window_len) * 8;
  if (size != expected)
    throw IoError("'" + bin_path + "': expected " + std::to_string(expected) + " bytes, found " +
                  std::to_string(size));

  archive.samples.resize(archive.window_len, static_cast<Eigen::Index>(archive.entries.size()));
  std::vector<char> buf(static_cast<std::size_t>(archive.window_len) * 8);
  for (Eigen::Index col = 0; col < archive.samples.cols(); ++col) {
    bin.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (bin.gcount() != static_cast<std::streamsize>(buf.size()))
      throw IoError("'" + bin_path + "': truncated");
    for (Eigen::Index row = 0; row < archive.window_len; ++row) {
      std::uint64_t raw = 0;
      for (int i = 0; i < 8; ++i)
        raw |= static_cast<std::uint64_t>(
                   static_cast<std::uint8_t>(buf[static_cast<std::size_t>(row) * 8 + i]))
               << (8 * i);
      archive.samples(row, col) = std::bit_cast<double>(raw);
    }
  }
  return archive;
}

}  // namespace mtcnn
