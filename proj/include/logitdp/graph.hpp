// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "logitdp/model.hpp"
#include "logitdp/tensor.hpp"

namespace logitdp {

// Reverse-mode tape over dense tensors. Supported primitives: affine layers
// (matmul / add_bias), ReLU, elementwise arithmetic, inner product, L2 norm,
// log, exp, square, sqrt, sum. Scalars are rank-0 tensors.
class Graph {
 public:
  using Id = std::size_t;

  Id constant(Tensor v);
  Id leaf(Tensor v);  // gradient-tracked input

  Id matmul(Id a, Id b);
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);
  Id div(Id a, Id b);
  Id add_bias(Id m, Id bias);  // broadcast a length-c vector over matrix rows
  Id relu(Id a);
  Id log(Id a);
  Id exp(Id a);
  Id square(Id a);
  Id sqrt(Id a);
  Id scale(Id a, double c);
  Id sum(Id a);          // scalar
  Id dot(Id a, Id b);    // scalar, flattened inner product
  Id norm(Id a);         // scalar, L2 norm of flattened tensor
  Id row(Id m, std::size_t r);

  const Tensor& value(Id id) const { return nodes_[id].value; }
  bool is_scalar(Id id) const { return nodes_[id].value.rank() == 0; }

  // d(value(scalar)) / d(leaf) for each requested leaf. Grads are zeroed on
  // entry, so the tape can be reused for several gradient sweeps.
  std::vector<Tensor> gradient(Id scalar, std::span<const Id> leaves);

 private:
  enum class Op {
    kInput,
    kMatmul,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kAddBias,
    kRelu,
    kLog,
    kExp,
    kSquare,
    kSqrt,
    kScale,
    kSum,
    kDot,
    kNorm,
    kRow,
  };
  struct Node {
    Op op = Op::kInput;
    Tensor value;
    Tensor grad;
    Id a = 0;
    Id b = 0;
    double c = 0.0;       // scale factor
    std::size_t index = 0;  // row index
    bool tracked = false;
  };

  static Node make_node(Op op, Tensor value);
  Id push(Node n);
  void backprop_node(std::size_t i);

  std::vector<Node> nodes_;
};

// A model's parameters embedded in a graph as tracked leaves.
struct GraphModel {
  std::vector<Graph::Id> weights;
  std::vector<Graph::Id> biases;

  GraphModel(Graph& g, const EmbeddingModel& model);

  // Forward pass through the embedded layers: ReLU hidden, identity output.
  Graph::Id forward(Graph& g, Graph::Id inputs) const;
};

// Gradient with respect to all model parameters (flattened layer-major) of a
// scalar built from forward passes of `model` and the graph primitives above.
std::vector<double> scalar_grad(
    const EmbeddingModel& model,
    const std::function<Graph::Id(Graph&, GraphModel&)>& scalar_fn);

}  // namespace logitdp
