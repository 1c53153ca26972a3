#pragma once

#include <span>

#include "rap/nn/parameters.hpp"
#include "rap/nn/tape.hpp"

namespace rap::nn {

// tanh on hidden layers, linear output layer.

Vector mlp_forward(const ParameterSet& params, std::span<const double> input);

/// Row-wise batch forward: inputs is (batch x in_dim).
Matrix mlp_forward_batch(const ParameterSet& params, const Matrix& inputs);

/// Differentiable forward on a tape; inputs is a (batch x in_dim) node.
Var mlp_forward(Tape& tape, const ParameterBinding& binding, Var inputs);

}  // namespace rap::nn
