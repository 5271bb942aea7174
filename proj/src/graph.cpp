// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/graph.hpp"

#include <cmath>

#include "logitdp/errors.hpp"

namespace logitdp {

namespace {

Tensor zeros_like(const Tensor& t) { return Tensor(t.shape()); }

Tensor scalar_tensor(double v) { return Tensor({}, {v}); }

}  // namespace

Graph::Node Graph::make_node(Op op, Tensor value) {
  Node n;
  n.op = op;
  n.value = std::move(value);
  return n;
}

Graph::Id Graph::push(Node n) {
  n.grad = zeros_like(n.value);
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

Graph::Id Graph::constant(Tensor v) {
  return push(make_node(Op::kInput, std::move(v)));
}

Graph::Id Graph::leaf(Tensor v) {
  Node n = make_node(Op::kInput, std::move(v));
  n.tracked = true;
  return push(std::move(n));
}

Graph::Id Graph::matmul(Id a, Id b) {
  const Tensor& A = nodes_[a].value;
  const Tensor& B = nodes_[b].value;
  if (A.rank() != 2 || B.rank() != 2 || A.cols() != B.rows()) {
    throw ShapeError("Graph::matmul: shape mismatch");
  }
  Tensor C = Tensor::matrix(A.rows(), B.cols());
  for (std::size_t r = 0; r < A.rows(); ++r) {
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const double av = A(r, k);
      for (std::size_t c = 0; c < B.cols(); ++c) C(r, c) += av * B(k, c);
    }
  }
  Node n = make_node(Op::kMatmul, std::move(C));
  n.a = a;
  n.b = b;
  return push(std::move(n));
}

#define LOGITDP_BINARY_ELEMWISE(NAME, OPCODE, EXPR)                        \
  Graph::Id Graph::NAME(Id a, Id b) {                                      \
    const Tensor& A = nodes_[a].value;                                     \
    const Tensor& B = nodes_[b].value;                                     \
    if (!A.same_shape(B)) throw ShapeError("Graph: shape mismatch");       \
    Tensor C = zeros_like(A);                                              \
    for (std::size_t i = 0; i < A.size(); ++i) {                           \
      const double x = A[i], y = B[i];                                     \
      C[i] = (EXPR);                                                       \
    }                                                                      \
    Node n = make_node(OPCODE, std::move(C));                                \
    n.a = a;                                                               \
    n.b = b;                                                               \
    return push(std::move(n));                                             \
  }

LOGITDP_BINARY_ELEMWISE(add, Op::kAdd, x + y)
LOGITDP_BINARY_ELEMWISE(sub, Op::kSub, x - y)
LOGITDP_BINARY_ELEMWISE(mul, Op::kMul, x* y)
LOGITDP_BINARY_ELEMWISE(div, Op::kDiv, x / y)

#undef LOGITDP_BINARY_ELEMWISE

Graph::Id Graph::add_bias(Id m, Id bias) {
  const Tensor& A = nodes_[m].value;
  const Tensor& b = nodes_[bias].value;
  if (A.rank() != 2 || b.rank() != 1 || b.shape()[0] != A.cols()) {
    throw ShapeError("Graph::add_bias: shape mismatch");
  }
  Tensor C = A;
  for (std::size_t r = 0; r < A.rows(); ++r) {
    for (std::size_t c = 0; c < A.cols(); ++c) C(r, c) += b[c];
  }
  Node n = make_node(Op::kAddBias, std::move(C));
  n.a = m;
  n.b = bias;
  return push(std::move(n));
}

#define LOGITDP_UNARY(NAME, OPCODE, EXPR)            \
  Graph::Id Graph::NAME(Id a) {                      \
    const Tensor& A = nodes_[a].value;               \
    Tensor C = zeros_like(A);                        \
    for (std::size_t i = 0; i < A.size(); ++i) {     \
      const double x = A[i];                         \
      C[i] = (EXPR);                                 \
    }                                                \
    Node n = make_node(OPCODE, std::move(C));          \
    n.a = a;                                         \
    return push(std::move(n));                       \
  }

LOGITDP_UNARY(relu, Op::kRelu, x > 0.0 ? x : 0.0)
LOGITDP_UNARY(log, Op::kLog, std::log(x))
LOGITDP_UNARY(exp, Op::kExp, std::exp(x))
LOGITDP_UNARY(square, Op::kSquare, x* x)
LOGITDP_UNARY(sqrt, Op::kSqrt, std::sqrt(x))

#undef LOGITDP_UNARY

Graph::Id Graph::scale(Id a, double c) {
  const Tensor& A = nodes_[a].value;
  Tensor C = zeros_like(A);
  for (std::size_t i = 0; i < A.size(); ++i) C[i] = c * A[i];
  Node n = make_node(Op::kScale, std::move(C));
  n.a = a;
  n.c = c;
  return push(std::move(n));
}

Graph::Id Graph::sum(Id a) {
  double s = 0.0;
  for (double v : nodes_[a].value.data()) s += v;
  Node n = make_node(Op::kSum, scalar_tensor(s));
  n.a = a;
  return push(std::move(n));
}

Graph::Id Graph::dot(Id a, Id b) {
  const Tensor& A = nodes_[a].value;
  const Tensor& B = nodes_[b].value;
  if (A.size() != B.size()) throw ShapeError("Graph::dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) s += A[i] * B[i];
  Node n = make_node(Op::kDot, scalar_tensor(s));
  n.a = a;
  n.b = b;
  return push(std::move(n));
}

Graph::Id Graph::norm(Id a) {
  Node n = make_node(Op::kNorm, scalar_tensor(l2_norm(nodes_[a].value.data())));
  n.a = a;
  return push(std::move(n));
}

Graph::Id Graph::row(Id m, std::size_t r) {
  const Tensor& A = nodes_[m].value;
  if (A.rank() != 2 || r >= A.rows()) throw ShapeError("Graph::row: bad row");
  std::span<const double> src = A.row(r);
  Node n = make_node(Op::kRow, Tensor({A.cols()}, {src.begin(), src.end()}));
  n.a = m;
  n.index = r;
  return push(std::move(n));
}

void Graph::backprop_node(std::size_t i) {
  Node& n = nodes_[i];
  const std::span<const double> g = n.grad.data();
  switch (n.op) {
    case Op::kInput:
      break;
    case Op::kMatmul: {
      const Tensor& A = nodes_[n.a].value;
      const Tensor& B = nodes_[n.b].value;
      Tensor& dA = nodes_[n.a].grad;
      Tensor& dB = nodes_[n.b].grad;
      for (std::size_t r = 0; r < A.rows(); ++r) {
        for (std::size_t k = 0; k < A.cols(); ++k) {
          double s = 0.0;
          for (std::size_t c = 0; c < B.cols(); ++c) {
            s += n.grad(r, c) * B(k, c);
          }
          dA(r, k) += s;
        }
      }
      for (std::size_t k = 0; k < B.rows(); ++k) {
        for (std::size_t c = 0; c < B.cols(); ++c) {
          double s = 0.0;
          for (std::size_t r = 0; r < A.rows(); ++r) {
            s += A(r, k) * n.grad(r, c);
          }
          dB(k, c) += s;
        }
      }
      break;
    }
    case Op::kAdd: {
      Tensor& dA = nodes_[n.a].grad;
      Tensor& dB = nodes_[n.b].grad;
      for (std::size_t j = 0; j < g.size(); ++j) {
        dA[j] += g[j];
        dB[j] += g[j];
      }
      break;
    }
    case Op::kSub: {
      Tensor& dA = nodes_[n.a].grad;
      Tensor& dB = nodes_[n.b].grad;
      for (std::size_t j = 0; j < g.size(); ++j) {
        dA[j] += g[j];
        dB[j] -= g[j];
      }
      break;
    }
    case Op::kMul: {
      const Tensor& A = nodes_[n.a].value;
      const Tensor& B = nodes_[n.b].value;
      Tensor& dA = nodes_[n.a].grad;
      Tensor& dB = nodes_[n.b].grad;
      for (std::size_t j = 0; j < g.size(); ++j) {
        dA[j] += g[j] * B[j];
        dB[j] += g[j] * A[j];
      }
      break;
    }
    case Op::kDiv: {
      const Tensor& A = nodes_[n.a].value;
      const Tensor& B = nodes_[n.b].value;
      Tensor& dA = nodes_[n.a].grad;
      Tensor& dB = nodes_[n.b].grad;
      for (std::size_t j = 0; j < g.size(); ++j) {
        dA[j] += g[j] / B[j];
        dB[j] -= g[j] * A[j] / (B[j] * B[j]);
      }
      break;
    }
    case Op::kAddBias: {
      Tensor& dA = nodes_[n.a].grad;
      Tensor& db = nodes_[n.b].grad;
      const std::size_t cols = n.value.cols();
      for (std::size_t j = 0; j < g.size(); ++j) {
        dA[j] += g[j];
        db[j % cols] += g[j];
      }
      break;
    }
    case Op::kRelu: {
      const Tensor& A = nodes_[n.a].value;
      Tensor& dA = nodes_[n.a].grad;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (A[j] > 0.0) dA[j] += g[j];
      }
      break;
    }
    case Op::kLog: {
      const Tensor& A = nodes_[n.a].value;
      Tensor& dA = nodes_[n.a].grad;
      for (std::size_t j = 0; j < g.size(); ++j) dA[j] += g[j] / A[j];
      break;
    }
    case Op::kExp: {
      Tensor& dA = nodes_[n.a].grad;
      for (std::size_t j = 0; j < g.size(); ++j) dA[j] += g[j] * n.value[j];
      break;
    }
    case Op::kSquare: {
      const Tensor& A = nodes_[n.a].value;
      Tensor& dA = nodes_[n.a].grad;
      for (std::size_t j = 0; j < g.size(); ++j) dA[j] += 2.0 * g[j] * A[j];
      break;
    }
    case Op::kSqrt: {
      Tensor& dA = nodes_[n.a].grad;
      for (std::size_t j = 0; j < g.size(); ++j) {
        dA[j] += n.value[j] > 0.0 ? 0.5 * g[j] / n.value[j] : 0.0;
      }
      break;
    }
    case Op::kScale: {
      Tensor& dA = nodes_[n.a].grad;
      for (std::size_t j = 0; j < g.size(); ++j) dA[j] += n.c * g[j];
      break;
    }
    case Op::kSum: {
      Tensor& dA = nodes_[n.a].grad;
      const double gv = g[0];
      for (std::size_t j = 0; j < dA.size(); ++j) dA[j] += gv;
      break;
    }
    case Op::kDot: {
      const Tensor& A = nodes_[n.a].value;
      const Tensor& B = nodes_[n.b].value;
      Tensor& dA = nodes_[n.a].grad;
      Tensor& dB = nodes_[n.b].grad;
      const double gv = g[0];
      for (std::size_t j = 0; j < A.size(); ++j) {
        dA[j] += gv * B[j];
        dB[j] += gv * A[j];
      }
      break;
    }
    case Op::kNorm: {
      const Tensor& A = nodes_[n.a].value;
      Tensor& dA = nodes_[n.a].grad;
      const double nv = n.value[0];
      if (nv > 0.0) {
        const double gv = g[0] / nv;
        for (std::size_t j = 0; j < A.size(); ++j) dA[j] += gv * A[j];
      }
      break;
    }
    case Op::kRow: {
      Tensor& dA = nodes_[n.a].grad;
      const std::size_t cols = n.value.size();
      for (std::size_t j = 0; j < cols; ++j) {
        dA(n.index, j) += g[j];
      }
      break;
    }
  }
}

std::vector<Tensor> Graph::gradient(Id scalar, std::span<const Id> leaves) {
  if (!is_scalar(scalar)) {
    throw ShapeError("Graph::gradient: node is not a scalar");
  }
  for (Node& n : nodes_) {
    for (double& v : n.grad.data()) v = 0.0;
  }
  nodes_[scalar].grad[0] = 1.0;
  for (std::size_t i = scalar + 1; i-- > 0;) backprop_node(i);
  std::vector<Tensor> out;
  out.reserve(leaves.size());
  for (Id id : leaves) out.push_back(nodes_[id].grad);
  return out;
}

GraphModel::GraphModel(Graph& g, const EmbeddingModel& model) {
  for (const Layer& l : model.params().layers()) {
    weights.push_back(g.leaf(l.weight));
    biases.push_back(g.leaf(l.bias));
  }
}

Graph::Id GraphModel::forward(Graph& g, Graph::Id inputs) const {
  Graph::Id act = inputs;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    act = g.add_bias(g.matmul(act, weights[k]), biases[k]);
    if (k + 1 < weights.size()) act = g.relu(act);
  }
  return act;
}

std::vector<double> scalar_grad(
    const EmbeddingModel& model,
    const std::function<Graph::Id(Graph&, GraphModel&)>& scalar_fn) {
  Graph g;
  GraphModel gm(g, model);
  const Graph::Id out = scalar_fn(g, gm);
  std::vector<Graph::Id> leaves;
  for (std::size_t k = 0; k < gm.weights.size(); ++k) {
    leaves.push_back(gm.weights[k]);
    leaves.push_back(gm.biases[k]);
  }
  const std::vector<Tensor> grads = g.gradient(out, leaves);
  std::vector<double> flat;
  flat.reserve(model.param_count());
  for (const Tensor& t : grads) {
    flat.insert(flat.end(), t.data().begin(), t.data().end());
  }
  return flat;
}

}  // namespace logitdp
