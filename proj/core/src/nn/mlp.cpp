#include "rap/nn/mlp.hpp"

#include "rap/errors.hpp"

namespace rap::nn {

Vector mlp_forward(const ParameterSet& params, std::span<const double> input) {
  if (params.layers.empty()) throw ShapeError("mlp_forward: network has no layers");
  if (static_cast<int>(input.size()) != params.input_dim())
    throw ShapeError("mlp_forward: input has " + std::to_string(input.size()) +
                     " entries, network expects " + std::to_string(params.input_dim()));
  Vector h = Eigen::Map<const Vector>(input.data(), static_cast<Eigen::Index>(input.size()));
  const std::size_t last = params.layers.size() - 1;
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    Vector z = params.layers[k].weight * h + params.layers[k].bias;
    h = (k == last) ? std::move(z) : Vector(z.array().tanh());
  }
  return h;
}

Matrix mlp_forward_batch(const ParameterSet& params, const Matrix& inputs) {
  if (params.layers.empty()) throw ShapeError("mlp_forward_batch: network has no layers");
  if (inputs.cols() != params.input_dim())
    throw ShapeError("mlp_forward_batch: inputs have " + std::to_string(inputs.cols()) +
                     " columns, network expects " + std::to_string(params.input_dim()));
  Matrix h = inputs;
  const std::size_t last = params.layers.size() - 1;
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    Matrix z = h * params.layers[k].weight.transpose();
    z.rowwise() += params.layers[k].bias.transpose();
    h = (k == last) ? std::move(z) : Matrix(z.array().tanh());
  }
  return h;
}

Var mlp_forward(Tape& tape, const ParameterBinding& binding, Var inputs) {
  if (binding.weights.empty()) throw ShapeError("mlp_forward: network has no layers");
  const int rows = static_cast<int>(tape.value(inputs).rows());
  Var h = inputs;
  const std::size_t last = binding.weights.size() - 1;
  for (std::size_t k = 0; k < binding.weights.size(); ++k) {
    Var z = tape.add(tape.matmul_nt(h, binding.weights[k]),
                     tape.broadcast_rows(binding.biases[k], rows));
    h = (k == last) ? z : tape.tanh(z);
  }
  return h;
}

}  // namespace rap::nn
