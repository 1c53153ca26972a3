#pragma once

#include <string>
#include <vector>

#include "rap/nn/parameters.hpp"

namespace rap::nn {

/// Handle to a value recorded on a Tape.
struct Var {
  int id = -1;
};

enum class Op {
  Leaf,
  Constant,
  MatMulNT,
  Add,
  Sub,
  Mul,
  Neg,
  Scale,
  AddScalar,
  Tanh,
  Exp,
  Log,
  Square,
  Minimum,
  Clip,
  BroadcastRows,
  Sum,
  Mean,
  RowSum,
  Opaque,
};

/// Matrix-valued reverse-mode tape. Covers the primitives a PPO loss needs;
/// anything else can be recorded with opaque() but cannot be differentiated.
class Tape {
 public:
  Var leaf(Matrix value);
  Var constant(Matrix value);
  Var scalar(double value);

  /// x * w^T for x (rows x k) and w (m x k).
  Var matmul_nt(Var x, Var w);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var neg(Var a);
  Var scale(Var a, double factor);
  Var add_scalar(Var a, double offset);
  Var tanh(Var a);
  Var exp(Var a);
  Var log(Var a);
  Var square(Var a);
  Var minimum(Var a, Var b);
  Var clip(Var a, double lo, double hi);
  /// Repeats a 1 x d row `rows` times.
  Var broadcast_rows(Var row, int rows);
  Var sum(Var a);
  Var mean(Var a);
  /// Sums each row: (r x c) -> (r x 1).
  Var row_sum(Var a);
  /// Records a value produced outside the primitive set. backward() throws
  /// UnsupportedOperationError if the loss depends on it.
  Var opaque(std::string name, Matrix value, std::vector<Var> inputs);

  const Matrix& value(Var v) const;
  double scalar_value(Var v) const;
  /// Valid after backward(); zero for nodes the loss does not depend on.
  const Matrix& grad(Var v) const;

  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Op op;
    Matrix value;
    Matrix grad;
    std::vector<int> inputs;
    double p0 = 0.0;
    double p1 = 0.0;
    std::string name;
  };

  Var push(Op op, Matrix value, std::vector<int> inputs, double p0 = 0.0, double p1 = 0.0);
  const Node& node(Var v) const;

  std::vector<Node> nodes_;
};

/// Leaf handles for every block of a ParameterSet recorded on a tape.
struct ParameterBinding {
  std::vector<Var> weights;
  std::vector<Var> biases;  // 1 x out rows
  Var log_std;              // 1 x d row; id -1 when absent
};

ParameterBinding bind_parameters(Tape& tape, const ParameterSet& params);

/// Reads the gradient of every bound block after tape.backward().
GradientSet collect_gradients(const Tape& tape, const ParameterBinding& binding);

}  // namespace rap::nn
