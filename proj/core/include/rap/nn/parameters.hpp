#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rap/rng.hpp"

namespace rap::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct LayerShape {
  int in = 0;
  int out = 0;
  bool operator==(const LayerShape&) const = default;
};

/// Dense layer, weight is out x in.
struct Layer {
  Matrix weight;
  Vector bias;
};

/// Ordered stack of dense layers plus an optional state-independent log_std
/// vector. Shared storage layout for parameters, gradients and Adam moments.
struct LayerStack {
  std::vector<Layer> layers;
  Vector log_std;

  int input_dim() const;
  int output_dim() const;
  std::vector<LayerShape> shapes() const;
  std::size_t parameter_count() const;
  bool all_finite() const;

  /// Contiguous views in canonical order: (W_0, b_0, W_1, b_1, ..., log_std).
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;

  bool same_shape(const LayerStack& other) const;
};

struct ParameterSet : LayerStack {
  /// Throws ShapeError if layer shapes do not chain, NumericError if any entry is non-finite.
  void validate() const;
};

struct GradientSet : LayerStack {
  static GradientSet zeros_like(const LayerStack& shape);
  double norm() const;
};

/// Bitwise equality of every stored double.
bool bit_identical(const LayerStack& a, const LayerStack& b);

/// FNV-1a digest over the raw bytes of every block, in canonical order.
std::uint64_t parameter_hash(const LayerStack& params);

std::vector<double> flatten(const LayerStack& params);
void unflatten(std::span<const double> values, LayerStack& params);

/// Shapes for an MLP in -> hidden... -> out.
std::vector<LayerShape> mlp_shapes(int in, std::span<const int> hidden, int out);

/// Glorot-uniform weights in [-sqrt(6/(in+out)), +sqrt(6/(in+out))], zero
/// biases, and a zero log_std of length log_std_dim (0 for value networks).
ParameterSet xavier_init(std::span<const LayerShape> shapes, Rng& rng, int log_std_dim = 0);

}  // namespace rap::nn
