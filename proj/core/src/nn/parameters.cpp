#include "rap/nn/parameters.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "rap/errors.hpp"

namespace rap::nn {
namespace {

template <class Blocks>
bool blocks_finite(const Blocks& blocks) {
  for (auto block : blocks)
    for (double v : block)
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

int LayerStack::input_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols());
}

int LayerStack::output_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().weight.rows());
}

std::vector<LayerShape> LayerStack::shapes() const {
  std::vector<LayerShape> out;
  out.reserve(layers.size());
  for (const auto& l : layers)
    out.push_back({static_cast<int>(l.weight.cols()), static_cast<int>(l.weight.rows())});
  return out;
}

std::size_t LayerStack::parameter_count() const {
  std::size_t n = static_cast<std::size_t>(log_std.size());
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

bool LayerStack::all_finite() const { return blocks_finite(blocks()); }

std::vector<std::span<double>> LayerStack::blocks() {
  std::vector<std::span<double>> out;
  out.reserve(2 * layers.size() + 1);
  for (auto& l : layers) {
    out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
    out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
  if (log_std.size() > 0) out.emplace_back(log_std.data(), static_cast<std::size_t>(log_std.size()));
  return out;
}

std::vector<std::span<const double>> LayerStack::blocks() const {
  std::vector<std::span<const double>> out;
  out.reserve(2 * layers.size() + 1);
  for (const auto& l : layers) {
    out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
    out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
  if (log_std.size() > 0) out.emplace_back(log_std.data(), static_cast<std::size_t>(log_std.size()));
  return out;
}

bool LayerStack::same_shape(const LayerStack& other) const {
  return shapes() == other.shapes() && log_std.size() == other.log_std.size();
}

void ParameterSet::validate() const {
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& l = layers[k];
    if (l.weight.rows() < 1 || l.weight.cols() < 1 || l.bias.size() != l.weight.rows()) {
      std::ostringstream msg;
      msg << "layer " << k << ": weight " << l.weight.rows() << "x" << l.weight.cols()
          << " incompatible with bias of length " << l.bias.size();
      throw ShapeError(msg.str());
    }
    if (k > 0 && layers[k - 1].weight.rows() != l.weight.cols()) {
      std::ostringstream msg;
      msg << "layer " << k << " expects " << l.weight.cols() << " inputs but layer " << k - 1
          << " produces " << layers[k - 1].weight.rows();
      throw ShapeError(msg.str());
    }
  }
  if (!all_finite()) throw NumericError("parameter set contains non-finite entries");
}

GradientSet GradientSet::zeros_like(const LayerStack& shape) {
  GradientSet g;
  g.layers.reserve(shape.layers.size());
  for (const auto& l : shape.layers)
    g.layers.push_back({Matrix::Zero(l.weight.rows(), l.weight.cols()), Vector::Zero(l.bias.size())});
  g.log_std = Vector::Zero(shape.log_std.size());
  return g;
}

double GradientSet::norm() const {
  double sq = 0.0;
  for (auto block : blocks())
    for (double v : block) sq += v * v;
  return std::sqrt(sq);
}

bool bit_identical(const LayerStack& a, const LayerStack& b) {
  if (!a.same_shape(b)) return false;
  auto ba = a.blocks();
  auto bb = b.blocks();
  for (std::size_t i = 0; i < ba.size(); ++i)
    if (std::memcmp(ba[i].data(), bb[i].data(), ba[i].size_bytes()) != 0) return false;
  return true;
}

std::uint64_t parameter_hash(const LayerStack& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto block : params.blocks()) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(block.data());
    for (std::size_t i = 0; i < block.size_bytes(); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::vector<double> flatten(const LayerStack& params) {
  std::vector<double> out;
  out.reserve(params.parameter_count());
  for (auto block : params.blocks()) out.insert(out.end(), block.begin(), block.end());
  return out;
}

void unflatten(std::span<const double> values, LayerStack& params) {
  if (values.size() != params.parameter_count())
    throw ShapeError("unflatten: expected " + std::to_string(params.parameter_count()) +
                     " values, got " + std::to_string(values.size()));
  std::size_t offset = 0;
  for (auto block : params.blocks()) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), block.size(), block.begin());
    offset += block.size();
  }
}

std::vector<LayerShape> mlp_shapes(int in, std::span<const int> hidden, int out) {
  std::vector<LayerShape> shapes;
  int prev = in;
  for (int h : hidden) {
    shapes.push_back({prev, h});
    prev = h;
  }
  shapes.push_back({prev, out});
  return shapes;
}

ParameterSet xavier_init(std::span<const LayerShape> shapes, Rng& rng, int log_std_dim) {
  if (shapes.empty()) throw ConfigError("xavier_init: at least one layer is required");
  if (log_std_dim < 0) throw ConfigError("xavier_init: negative log_std dimension");
  ParameterSet params;
  params.layers.reserve(shapes.size());
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const auto [in, out] = shapes[k];
    if (in < 1 || out < 1)
      throw ConfigError("xavier_init: layer " + std::to_string(k) + " has non-positive dimension (" +
                        std::to_string(in) + ", " + std::to_string(out) + ")");
    if (k > 0 && shapes[k - 1].out != in)
      throw ConfigError("xavier_init: layer shapes do not chain at layer " + std::to_string(k));
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Layer layer{Matrix(out, in), Vector::Zero(out)};
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) layer.weight.data()[i] = dist(rng);
    params.layers.push_back(std::move(layer));
  }
  params.log_std = Vector::Zero(log_std_dim);
  return params;
}

}  // namespace rap::nn
