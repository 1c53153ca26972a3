#include "rap/nn/tape.hpp"

#include <sstream>

#include "rap/errors.hpp"

namespace rap::nn {
namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(op) + ": operand shapes differ (" + shape_str(a) + " vs " +
                     shape_str(b) + ")");
}

}  // namespace

Var Tape::push(Op op, Matrix value, std::vector<int> inputs, double p0, double p1) {
  nodes_.push_back(Node{op, std::move(value), Matrix(), std::move(inputs), p0, p1, {}});
  return Var{static_cast<int>(nodes_.size()) - 1};
}

const Tape::Node& Tape::node(Var v) const {
  if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size())
    throw ShapeError("tape: invalid variable handle " + std::to_string(v.id));
  return nodes_[static_cast<std::size_t>(v.id)];
}

Var Tape::leaf(Matrix value) { return push(Op::Leaf, std::move(value), {}); }
Var Tape::constant(Matrix value) { return push(Op::Constant, std::move(value), {}); }
Var Tape::scalar(double value) { return constant(Matrix::Constant(1, 1, value)); }

Var Tape::matmul_nt(Var x, Var w) {
  const auto& xv = node(x).value;
  const auto& wv = node(w).value;
  if (xv.cols() != wv.cols())
    throw ShapeError("matmul_nt: " + shape_str(xv) + " * (" + shape_str(wv) + ")^T");
  Matrix out = xv * wv.transpose();
  return push(Op::MatMulNT, std::move(out), {x.id, w.id});
}

Var Tape::add(Var a, Var b) {
  require_same_shape("add", node(a).value, node(b).value);
  return push(Op::Add, node(a).value + node(b).value, {a.id, b.id});
}

Var Tape::sub(Var a, Var b) {
  require_same_shape("sub", node(a).value, node(b).value);
  return push(Op::Sub, node(a).value - node(b).value, {a.id, b.id});
}

Var Tape::mul(Var a, Var b) {
  require_same_shape("mul", node(a).value, node(b).value);
  return push(Op::Mul, node(a).value.cwiseProduct(node(b).value), {a.id, b.id});
}

Var Tape::neg(Var a) { return push(Op::Neg, -node(a).value, {a.id}); }

Var Tape::scale(Var a, double factor) {
  return push(Op::Scale, node(a).value * factor, {a.id}, factor);
}

Var Tape::add_scalar(Var a, double offset) {
  return push(Op::AddScalar, node(a).value.array() + offset, {a.id}, offset);
}

Var Tape::tanh(Var a) { return push(Op::Tanh, node(a).value.array().tanh(), {a.id}); }
Var Tape::exp(Var a) { return push(Op::Exp, node(a).value.array().exp(), {a.id}); }
Var Tape::log(Var a) { return push(Op::Log, node(a).value.array().log(), {a.id}); }
Var Tape::square(Var a) { return push(Op::Square, node(a).value.array().square(), {a.id}); }

Var Tape::minimum(Var a, Var b) {
  require_same_shape("minimum", node(a).value, node(b).value);
  return push(Op::Minimum, node(a).value.cwiseMin(node(b).value), {a.id, b.id});
}

Var Tape::clip(Var a, double lo, double hi) {
  if (!(lo <= hi)) throw ShapeError("clip: lower bound exceeds upper bound");
  return push(Op::Clip, node(a).value.cwiseMax(lo).cwiseMin(hi), {a.id}, lo, hi);
}

Var Tape::broadcast_rows(Var row, int rows) {
  const auto& rv = node(row).value;
  if (rv.rows() != 1 || rows < 1)
    throw ShapeError("broadcast_rows: expected a 1xd row, got " + shape_str(rv));
  Matrix out = rv.replicate(rows, 1);
  return push(Op::BroadcastRows, std::move(out), {row.id});
}

Var Tape::sum(Var a) { return push(Op::Sum, Matrix::Constant(1, 1, node(a).value.sum()), {a.id}); }

Var Tape::mean(Var a) {
  const auto& v = node(a).value;
  if (v.size() == 0) throw ShapeError("mean: empty operand");
  return push(Op::Mean, Matrix::Constant(1, 1, v.mean()), {a.id});
}

Var Tape::row_sum(Var a) {
  Matrix out = node(a).value.rowwise().sum();
  return push(Op::RowSum, std::move(out), {a.id});
}

Var Tape::opaque(std::string name, Matrix value, std::vector<Var> inputs) {
  std::vector<int> ids;
  ids.reserve(inputs.size());
  for (Var v : inputs) {
    node(v);  // validates the handle
    ids.push_back(v.id);
  }
  Var out = push(Op::Opaque, std::move(value), std::move(ids));
  nodes_.back().name = std::move(name);
  return out;
}

const Matrix& Tape::value(Var v) const { return node(v).value; }

double Tape::scalar_value(Var v) const {
  const auto& m = node(v).value;
  if (m.size() != 1) throw ShapeError("scalar_value: node is " + shape_str(m));
  return m(0, 0);
}

const Matrix& Tape::grad(Var v) const {
  const auto& n = node(v);
  if (n.grad.size() == 0 && n.value.size() != 0)
    throw ProtocolError("grad: backward() has not reached this node");
  return n.grad;
}

void Tape::backward(Var loss) {
  const auto& root = node(loss);
  if (root.value.size() != 1) throw ShapeError("backward: loss must be scalar, got " + shape_str(root.value));

  const std::size_t count = static_cast<std::size_t>(loss.id) + 1;
  std::vector<char> needed(nodes_.size(), 0);
  needed[static_cast<std::size_t>(loss.id)] = 1;
  for (std::size_t i = count; i-- > 0;) {
    if (!needed[i]) continue;
    if (nodes_[i].op == Op::Opaque)
      throw UnsupportedOperationError("backward: no gradient rule for operation '" +
                                      nodes_[i].name + "'");
    for (int in : nodes_[i].inputs) needed[static_cast<std::size_t>(in)] = 1;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    nodes_[i].grad = Matrix::Zero(nodes_[i].value.rows(), nodes_[i].value.cols());
  nodes_[static_cast<std::size_t>(loss.id)].grad(0, 0) = 1.0;

  for (std::size_t i = count; i-- > 0;) {
    if (!needed[i]) continue;
    Node& n = nodes_[i];
    const Matrix& g = n.grad;
    auto in_node = [&](std::size_t k) -> Node& { return nodes_[static_cast<std::size_t>(n.inputs[k])]; };
    switch (n.op) {
      case Op::Leaf:
      case Op::Constant:
        break;
      case Op::MatMulNT: {
        Node& x = in_node(0);
        Node& w = in_node(1);
        x.grad.noalias() += g * w.value;
        w.grad.noalias() += g.transpose() * x.value;
        break;
      }
      case Op::Add:
        in_node(0).grad += g;
        in_node(1).grad += g;
        break;
      case Op::Sub:
        in_node(0).grad += g;
        in_node(1).grad -= g;
        break;
      case Op::Mul: {
        Node& a = in_node(0);
        Node& b = in_node(1);
        a.grad += g.cwiseProduct(b.value);
        b.grad += g.cwiseProduct(a.value);
        break;
      }
      case Op::Neg:
        in_node(0).grad -= g;
        break;
      case Op::Scale:
        in_node(0).grad += g * n.p0;
        break;
      case Op::AddScalar:
        in_node(0).grad += g;
        break;
      case Op::Tanh:
        in_node(0).grad.array() += g.array() * (1.0 - n.value.array().square());
        break;
      case Op::Exp:
        in_node(0).grad.array() += g.array() * n.value.array();
        break;
      case Op::Log: {
        Node& a = in_node(0);
        a.grad.array() += g.array() / a.value.array();
        break;
      }
      case Op::Square: {
        Node& a = in_node(0);
        a.grad.array() += 2.0 * g.array() * a.value.array();
        break;
      }
      case Op::Minimum: {
        Node& a = in_node(0);
        Node& b = in_node(1);
        for (Eigen::Index r = 0; r < g.rows(); ++r)
          for (Eigen::Index c = 0; c < g.cols(); ++c) {
            if (a.value(r, c) <= b.value(r, c))
              a.grad(r, c) += g(r, c);
            else
              b.grad(r, c) += g(r, c);
          }
        break;
      }
      case Op::Clip: {
        Node& a = in_node(0);
        for (Eigen::Index r = 0; r < g.rows(); ++r)
          for (Eigen::Index c = 0; c < g.cols(); ++c) {
            const double x = a.value(r, c);
            if (x >= n.p0 && x <= n.p1) a.grad(r, c) += g(r, c);
          }
        break;
      }
      case Op::BroadcastRows:
        in_node(0).grad += g.colwise().sum();
        break;
      case Op::Sum:
        in_node(0).grad.array() += g(0, 0);
        break;
      case Op::Mean: {
        Node& a = in_node(0);
        a.grad.array() += g(0, 0) / static_cast<double>(a.value.size());
        break;
      }
      case Op::RowSum: {
        Node& a = in_node(0);
        a.grad += g.replicate(1, a.value.cols());
        break;
      }
      case Op::Opaque:
        break;  // rejected above
    }
  }
}

ParameterBinding bind_parameters(Tape& tape, const ParameterSet& params) {
  ParameterBinding b;
  b.weights.reserve(params.layers.size());
  b.biases.reserve(params.layers.size());
  for (const auto& l : params.layers) {
    b.weights.push_back(tape.leaf(l.weight));
    b.biases.push_back(tape.leaf(l.bias.transpose()));
  }
  if (params.log_std.size() > 0) b.log_std = tape.leaf(params.log_std.transpose());
  return b;
}

GradientSet collect_gradients(const Tape& tape, const ParameterBinding& binding) {
  GradientSet g;
  g.layers.reserve(binding.weights.size());
  for (std::size_t k = 0; k < binding.weights.size(); ++k) {
    g.layers.push_back({tape.grad(binding.weights[k]), tape.grad(binding.biases[k]).transpose()});
  }
  if (binding.log_std.id >= 0) g.log_std = tape.grad(binding.log_std).transpose();
  return g;
}

}  // namespace rap::nn
