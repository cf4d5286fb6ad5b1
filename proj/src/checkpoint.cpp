#include "mtcnn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "mtcnn/errors.hpp"

namespace mtcnn {
namespace {

constexpr char kMagic[6] = {'M', 'T', 'C', 'N', 'N', '1'};
constexpr std::uint32_t kVersion = 1;
// Guard against absurd length prefixes before allocating.
constexpr std::uint64_t kMaxBufferElements = 1ULL << 32;

struct Writer {
  std::ofstream out;

  void bytes(const void* data, std::size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    bytes(b, 4);
  }
  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    bytes(b, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
};

struct Reader {
  std::ifstream in;
  std::string path;

  void bytes(void* data, std::size_t n) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n))
      throw IoError("'" + path + "': truncated checkpoint");
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    if (n > (1u << 20)) throw IoError("'" + path + "': corrupt checkpoint (string length)");
    std::string s(n, '\0');
    if (n > 0) bytes(s.data(), n);
    return s;
  }
};

}  // namespace

void write_checkpoint(const std::string& path, const ModelCheckpoint& checkpoint) {
  Writer w{std::ofstream(path, std::ios::binary)};
  if (!w.out) throw IoError("cannot write '" + path + "'");

  w.bytes(kMagic, sizeof(kMagic));
  w.u32(checkpoint.version);

  const ModelConfig& c = checkpoint.config;
  w.u32(static_cast<std::uint32_t>(c.window_len));
  w.u32(static_cast<std::uint32_t>(c.depth));
  w.u32(static_cast<std::uint32_t>(c.kernel_size));
  w.u32(static_cast<std::uint32_t>(c.classes));
  w.u8(c.head == Head::Sigmoid ? 0 : 1);
  w.u8(c.dense_bias ? 1 : 0);
  w.f64(c.dropout_rate);
  const auto filters = c.effective_filters();
  w.u32(static_cast<std::uint32_t>(filters.size()));
  for (auto f : filters) w.u32(static_cast<std::uint32_t>(f));
  w.u32(static_cast<std::uint32_t>(c.class_names.size()));
  for (const auto& name : c.class_names) w.str(name);

  w.u64(checkpoint.seed);
  w.u32(static_cast<std::uint32_t>(checkpoint.buffers.size()));
  for (const auto& buffer : checkpoint.buffers) {
    w.u64(static_cast<std::uint64_t>(buffer.size()));
    for (Eigen::Index i = 0; i < buffer.size(); ++i) w.f64(buffer[i]);
  }
  if (!w.out) throw IoError("write failed for '" + path + "'");
}

ModelCheckpoint read_checkpoint(const std::string& path) {
  Reader r{std::ifstream(path, std::ios::binary), path};
  if (!r.in) throw IoError("cannot open '" + path + "'");

  char magic[6];
  r.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("'" + path + "' is not a checkpoint (bad magic)");

  ModelCheckpoint checkpoint;
  checkpoint.version = r.u32();
  if (checkpoint.version != kVersion)
    throw IoError("'" + path + "': unsupported checkpoint version " +
                  std::to_string(checkpoint.version));

  ModelConfig& c = checkpoint.config;
  c.window_len = static_cast<Eigen::Index>(r.u32());
  c.depth = static_cast<int>(r.u32());
  c.kernel_size = static_cast<Eigen::Index>(r.u32());
  c.classes = static_cast<int>(r.u32());
  c.head = r.u8() == 0 ? Head::Sigmoid : Head::Softmax;
  c.dense_bias = r.u8() != 0;
  c.dropout_rate = r.f64();
  const std::uint32_t filter_count = r.u32();
  if (filter_count > 8) throw IoError("'" + path + "': corrupt checkpoint (filter count)");
  c.filters.clear();
  for (std::uint32_t i = 0; i < filter_count; ++i)
    c.filters.push_back(static_cast<Eigen::Index>(r.u32()));
  const std::uint32_t name_count = r.u32();
  if (name_count > 64) throw IoError("'" + path + "': corrupt checkpoint (class count)");
  for (std::uint32_t i = 0; i < name_count; ++i) c.class_names.push_back(r.str());

  checkpoint.seed = r.u64();
  const std::uint32_t buffer_count = r.u32();
  if (buffer_count > 64) throw IoError("'" + path + "': corrupt checkpoint (buffer count)");
  for (std::uint32_t b = 0; b < buffer_count; ++b) {
    const std::uint64_t count = r.u64();
    if (count > kMaxBufferElements)
      throw IoError("'" + path + "': corrupt checkpoint (buffer length overrun)");
    Vector buffer(static_cast<Eigen::Index>(count));
    for (std::uint64_t i = 0; i < count; ++i) buffer[static_cast<Eigen::Index>(i)] = r.f64();
    checkpoint.buffers.push_back(std::move(buffer));
  }
  return checkpoint;
}

ModelCheckpoint checkpoint_from_model(const Model& model) {
  ModelCheckpoint checkpoint;
  checkpoint.config = model.config;
  checkpoint.seed = model.init_seed;
  for (const auto& [name, value] : model.param_values())
    checkpoint.buffers.push_back(Eigen::Map<const Vector>(value->data(), value->size()));
  return checkpoint;
}

Model model_from_checkpoint(const ModelCheckpoint& checkpoint) {
  checkpoint.config.validate();
  Model model = init_model(checkpoint.config, checkpoint.seed);
  auto buffers = model.params();
  if (buffers.size() != checkpoint.buffers.size())
    throw IoError("checkpoint buffer count " + std::to_string(checkpoint.buffers.size()) +
                  " does not match the config's " + std::to_string(buffers.size()));
  for (std::size_t i = 0; i < buffers.size(); ++i) {
    Matrix& value = *buffers[i].value;
    if (checkpoint.buffers[i].size() != value.size())
      throw IoError("checkpoint buffer '" + buffers[i].name + "' has " +
                    std::to_string(checkpoint.buffers[i].size()) + " values, expected " +
                    std::to_string(value.size()));
    value = Eigen::Map<const Matrix>(checkpoint.buffers[i].data(), value.rows(), value.cols());
  }
  return model;
}

}  // namespace mtcnn
