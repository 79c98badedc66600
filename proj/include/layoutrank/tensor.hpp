// Copyright (c) 2026 The LayoutRank Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense f64 tensors and a tape for reverse-mode gradients, sized for small
// graph models: every tensor is a row-major matrix, vectors are 1 x n or
// n x 1 and scalars are 1 x 1.

#ifndef LAYOUTRANK_TENSOR_HPP
#define LAYOUTRANK_TENSOR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace layoutrank::tensor {

class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Tensor scalar(double value) { return Tensor(1, 1, value); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  std::array<std::size_t, 2> shape() const { return {rows_, cols_}; }
  bool same_shape(const Tensor& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  // Value of a 1 x 1 tensor.
  double item() const;
  bool all_finite() const;
  void fill(double value);

  bool operator==(const Tensor&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class Tape;

// Handle to a value recorded on a tape.
class Var {
 public:
  Var() = default;
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  const Tensor& value() const;
  const Tensor& grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Records operations in execution order. backward() walks the records in
// reverse, visiting each once. A tape and its values belong to one thread.
class Tape {
 public:
  // Receives the tape, the op's output value and the gradient flowing into it.
  using Backward = std::function<void(Tape&, const Tensor&, const Tensor&)>;

  Var constant(Tensor value);
  Var variable(Tensor value);

  const Tensor& value(Var v) const { return nodes_[v.id_].value; }
  // Gradient accumulated by backward(); zeros if none reached this value.
  const Tensor& grad(Var v) const;
  bool requires_grad(Var v) const { return nodes_[v.id_].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Throws NonScalarLoss unless loss is 1 x 1.
  void backward(Var loss);

  // Used by the op implementations.
  Var record(Tensor value, std::span<const Var> inputs, Backward backward);
  Var record(Tensor value, std::initializer_list<Var> inputs, Backward backward) {
    return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                  std::move(backward));
  }
  void accumulate(Var v, const Tensor& g);
  Tensor& grad_buffer(Var v);

 private:
  struct Node {
    Tensor value;
    mutable Tensor grad;  // allocated on first use
    bool requires_grad = false;
    Backward backward;
  };
  std::vector<Node> nodes_;
};

// Differentiable ops. Shape errors throw ShapeMismatch.
Var matmul(Var a, Var b);     // [m,k] x [k,n]
Var matmul_nt(Var a, Var b);  // [m,k] x [n,k]^T
Var transpose(Var a);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);        // elementwise
Var add_row(Var a, Var row);  // [n,d] + [1,d] broadcast over rows
Var mul_col(Var a, Var col);  // [n,d] * [n,1] broadcast over columns
Var mul_scalar(Var a, Var s);  // [n,d] * [1,1]
Var scale(Var a, double s);
Var concat_rows(std::span<const Var> parts);
Var concat_cols(Var a, Var b);
Var leaky_relu(Var a, double slope);
Var elu(Var a, double alpha = 1.0);
Var sigmoid(Var a);
Var sum(Var a);
Var mean(Var a);
// Rows of table at the given indices.
Var gather_rows(Var table, std::vector<std::size_t> indices);
// Softmax of a [E,1] column within each segment. Throws EmptySegment if a
// segment in [0, num_segments) has no member.
Var segment_softmax(Var logits, std::vector<std::size_t> segment_of, std::size_t num_segments);
// Scatter-add of [E,d] rows into [num_segments,d].
Var segment_sum(Var values, std::vector<std::size_t> segment_of, std::size_t num_segments);
Var segment_mean(Var values, std::vector<std::size_t> segment_of, std::size_t num_segments);
// Inverted dropout in training, identity otherwise. Throws BadProbability
// unless 0 <= p < 1.
Var dropout(Var x, double p, bool training, std::uint64_t seed);
// Mean squared error of a [n,1] prediction against a [n,1] target.
Var mse(Var prediction, const Tensor& target);

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::int64_t t = 0;
};

// One bias-corrected Adam update of every parameter in place.
void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, AdamState& state,
               const AdamOptions& options);

}  // namespace layoutrank::tensor

#endif  // LAYOUTRANK_TENSOR_HPP
