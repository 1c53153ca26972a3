#include "rap/nn/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <string_view>

#include "rap/errors.hpp"

namespace rap::nn {
namespace {

constexpr std::string_view kMagic = "RAPCKPT1";

class Writer {
 public:
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(std::string_view s) { out_.append(s); }
  std::string take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw IoError("checkpoint: truncated data");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + static_cast<std::size_t>(i)])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  const std::string& in_;
  std::size_t pos_ = 0;
};

void write_net(Writer& w, std::string_view name, const ParameterSet& p) {
  w.u32(static_cast<std::uint32_t>(name.size()));
  w.bytes(name);
  w.u32(static_cast<std::uint32_t>(p.layers.size()));
  for (const auto& l : p.layers) {
    w.u32(static_cast<std::uint32_t>(l.weight.rows()));
    w.u32(static_cast<std::uint32_t>(l.weight.cols()));
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) w.f64(l.weight.data()[i]);
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) w.f64(l.bias[i]);
  }
  w.u32(static_cast<std::uint32_t>(p.log_std.size()));
  for (Eigen::Index i = 0; i < p.log_std.size(); ++i) w.f64(p.log_std[i]);
}

ParameterSet read_net(Reader& r, std::string_view expected_name) {
  const auto name = r.bytes(r.u32());
  if (name != expected_name)
    throw IoError("checkpoint: expected network '" + std::string(expected_name) + "', found '" + name + "'");
  ParameterSet p;
  const std::uint32_t n_layers = r.u32();
  if (n_layers == 0 || n_layers > 64) throw IoError("checkpoint: implausible layer count");
  for (std::uint32_t k = 0; k < n_layers; ++k) {
    const auto rows = r.u32();
    const auto cols = r.u32();
    if (rows == 0 || cols == 0 || rows > (1u << 16) || cols > (1u << 16))
      throw IoError("checkpoint: implausible layer shape");
    Layer l{Matrix(rows, cols), Vector(rows)};
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) l.weight.data()[i] = r.f64();
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias[i] = r.f64();
    p.layers.push_back(std::move(l));
  }
  const auto d = r.u32();
  if (d > (1u << 16)) throw IoError("checkpoint: implausible log_std length");
  p.log_std.resize(d);
  for (Eigen::Index i = 0; i < p.log_std.size(); ++i) p.log_std[i] = r.f64();
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw IoError(std::string("checkpoint: ") + e.what());
  }
  return p;
}

}  // namespace

std::string encode_checkpoint(const ActorCritic& model, std::uint64_t seed) {
  Writer w;
  w.bytes(kMagic);
  w.u64(seed);
  w.u32(2);
  write_net(w, "policy", model.policy);
  write_net(w, "value", model.value);
  return w.take();
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  Reader r(bytes);
  if (r.bytes(kMagic.size()) != kMagic) throw IoError("checkpoint: bad magic");
  Checkpoint c;
  c.seed = r.u64();
  if (r.u32() != 2) throw IoError("checkpoint: expected 2 networks");
  c.model.policy = read_net(r, "policy");
  c.model.value = read_net(r, "value");
  if (!r.at_end()) throw IoError("checkpoint: trailing bytes");
  if (c.model.value.input_dim() != c.model.policy.input_dim() || c.model.value.output_dim() != 1)
    throw IoError("checkpoint: value network does not match policy");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const ActorCritic& model,
                     std::uint64_t seed) {
  const auto bytes = encode_checkpoint(model, seed);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_checkpoint(ss.str());
}

}  // namespace rap::nn
