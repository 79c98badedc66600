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

#include "layoutrank/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "layoutrank/errors.hpp"

namespace layoutrank::tensor {

namespace {

std::string shape_str(const Tensor& t) {
  return "[" + std::to_string(t.rows()) + "," + std::to_string(t.cols()) + "]";
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeMismatch(std::string(op) + ": " + shape_str(a) + " vs " + shape_str(b));
  }
}

void check_finite([[maybe_unused]] const Tensor& t, [[maybe_unused]] const char* op) {
#ifndef NDEBUG
  if (!t.all_finite()) throw NonFinite(std::string(op) + " produced a non-finite value");
#endif
}

// out[m,n] += a[m,k] * b[k,n]
void gemm_nn(const Tensor& a, const Tensor& b, Tensor& out) {
  const auto m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    double* o = out.row(i).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(i, p);
      if (av == 0.0) continue;
      const double* br = b.row(p).data();
      for (std::size_t j = 0; j < n; ++j) o[j] += av * br[j];
    }
  }
}

// out[m,n] += a[m,k] * b[n,k]^T
void gemm_nt(const Tensor& a, const Tensor& b, Tensor& out) {
  const auto m = a.rows(), k = a.cols(), n = b.rows();
  for (std::size_t i = 0; i < m; ++i) {
    const double* ar = a.row(i).data();
    for (std::size_t j = 0; j < n; ++j) {
      const double* br = b.row(j).data();
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += ar[p] * br[p];
      out(i, j) += s;
    }
  }
}

// out[k,n] += a[m,k]^T * b[m,n]
void gemm_tn(const Tensor& a, const Tensor& b, Tensor& out) {
  const auto m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    const double* br = b.row(i).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(i, p);
      if (av == 0.0) continue;
      double* o = out.row(p).data();
      for (std::size_t j = 0; j < n; ++j) o[j] += av * br[j];
    }
  }
}

template <typename F>
Tensor map(const Tensor& a, F f) {
  Tensor out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

void check_segments(const std::vector<std::size_t>& segment_of, std::size_t rows,
                    std::size_t num_segments, const char* op) {
  if (segment_of.size() != rows) {
    throw ShapeMismatch(std::string(op) + ": " + std::to_string(segment_of.size()) +
                        " segment ids for " + std::to_string(rows) + " rows");
  }
  for (auto s : segment_of) {
    if (s >= num_segments) throw ShapeMismatch(std::string(op) + ": segment id out of range");
  }
}

}  // namespace

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeMismatch("data length " + std::to_string(data_.size()) + " for shape [" +
                        std::to_string(rows) + "," + std::to_string(cols) + "]");
  }
}

double Tensor::item() const {
  if (rows_ != 1 || cols_ != 1) throw ShapeMismatch("item() on " + shape_str(*this));
  return data_[0];
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

const Tensor& Var::value() const { return tape_->value(*this); }
const Tensor& Var::grad() const { return tape_->grad(*this); }

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, false, {}});
  return Var(this, nodes_.size() - 1);
}

Var Tape::variable(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, true, {}});
  return Var(this, nodes_.size() - 1);
}

const Tensor& Tape::grad(Var v) const {
  const auto& node = nodes_[v.id_];
  if (node.grad.size() != node.value.size() || !node.grad.same_shape(node.value)) {
    node.grad = Tensor(node.value.rows(), node.value.cols());
  }
  return node.grad;
}

Tensor& Tape::grad_buffer(Var v) {
  auto& node = nodes_[v.id_];
  if (!node.grad.same_shape(node.value) || node.grad.size() != node.value.size()) {
    node.grad = Tensor(node.value.rows(), node.value.cols());
  }
  return node.grad;
}

void Tape::accumulate(Var v, const Tensor& g) {
  if (!nodes_[v.id_].requires_grad) return;
  auto& buf = grad_buffer(v);
  for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i];
}

Var Tape::record(Tensor value, std::span<const Var> inputs, Backward backward) {
  bool needs = std::any_of(inputs.begin(), inputs.end(),
                           [this](Var in) { return nodes_[in.id_].requires_grad; });
  nodes_.push_back(Node{std::move(value), {}, needs, needs ? std::move(backward) : Backward{}});
  return Var(this, nodes_.size() - 1);
}

void Tape::backward(Var loss) {
  auto& root = nodes_[loss.id_];
  if (root.value.rows() != 1 || root.value.cols() != 1) {
    throw NonScalarLoss("loss has shape " + shape_str(root.value));
  }
  for (auto& n : nodes_) n.grad = Tensor();
  if (!root.requires_grad) return;
  grad_buffer(loss)[0] = 1.0;
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    auto& node = nodes_[i];
    if (!node.requires_grad || !node.backward) continue;
    if (node.grad.size() == 0 && node.value.size() != 0) continue;  // unreached
    node.backward(*this, node.value, node.grad);
  }
}

Var matmul(Var a, Var b) {
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.cols() != bv.rows()) throw ShapeMismatch("matmul: " + shape_str(av) + " x " + shape_str(bv));
  Tensor out(av.rows(), bv.cols());
  gemm_nn(av, bv, out);
  check_finite(out, "matmul");
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor&, const Tensor& g) {
    if (t.requires_grad(a)) gemm_nt(g, t.value(b), t.grad_buffer(a));
    if (t.requires_grad(b)) gemm_tn(t.value(a), g, t.grad_buffer(b));
  });
}

Var matmul_nt(Var a, Var b) {
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.cols() != bv.cols()) throw ShapeMismatch("matmul_nt: " + shape_str(av) + " x " + shape_str(bv) + "^T");
  Tensor out(av.rows(), bv.rows());
  gemm_nt(av, bv, out);
  check_finite(out, "matmul_nt");
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor&, const Tensor& g) {
    // out = A B^T: dA = G B, dB = G^T A
    if (t.requires_grad(a)) gemm_nn(g, t.value(b), t.grad_buffer(a));
    if (t.requires_grad(b)) gemm_tn(g, t.value(a), t.grad_buffer(b));
  });
}

Var transpose(Var a) {
  const auto& av = a.value();
  Tensor out(av.cols(), av.rows());
  for (std::size_t i = 0; i < av.rows(); ++i)
    for (std::size_t j = 0; j < av.cols(); ++j) out(j, i) = av(i, j);
  return a.tape().record(std::move(out), {a}, [a](Tape& t, const Tensor&, const Tensor& g) {
    auto& ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < ga.rows(); ++i)
      for (std::size_t j = 0; j < ga.cols(); ++j) ga(i, j) += g(j, i);
  });
}

Var add(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "add");
  Tensor out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  check_finite(out, "add");
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor&, const Tensor& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var sub(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "sub");
  Tensor out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  check_finite(out, "sub");
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor&, const Tensor& g) {
    t.accumulate(a, g);
    if (t.requires_grad(b)) {
      auto& gb = t.grad_buffer(b);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "mul");
  Tensor out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  check_finite(out, "mul");
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor&, const Tensor& g) {
    if (t.requires_grad(a)) {
      auto& ga = t.grad_buffer(a);
      const auto& bv = t.value(b);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (t.requires_grad(b)) {
      auto& gb = t.grad_buffer(b);
      const auto& av = t.value(a);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var add_row(Var a, Var row) {
  const auto& av = a.value();
  const auto& rv = row.value();
  if (rv.rows() != 1 || rv.cols() != av.cols()) throw ShapeMismatch("add_row: " + shape_str(av) + " + " + shape_str(rv));
  Tensor out = av;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += rv(0, j);
  check_finite(out, "add_row");
  return a.tape().record(std::move(out), {a, row}, [a, row](Tape& t, const Tensor&, const Tensor& g) {
    t.accumulate(a, g);
    if (t.requires_grad(row)) {
      auto& gr = t.grad_buffer(row);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) gr(0, j) += g(i, j);
    }
  });
}

Var mul_col(Var a, Var col) {
  const auto& av = a.value();
  const auto& cv = col.value();
  if (cv.cols() != 1 || cv.rows() != av.rows()) throw ShapeMismatch("mul_col: " + shape_str(av) + " * " + shape_str(cv));
  Tensor out = av;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= cv(i, 0);
  check_finite(out, "mul_col");
  return a.tape().record(std::move(out), {a, col}, [a, col](Tape& t, const Tensor&, const Tensor& g) {
    const auto& av = t.value(a);
    const auto& cv = t.value(col);
    if (t.requires_grad(a)) {
      auto& ga = t.grad_buffer(a);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) ga(i, j) += g(i, j) * cv(i, 0);
    }
    if (t.requires_grad(col)) {
      auto& gc = t.grad_buffer(col);
      for (std::size_t i = 0; i < g.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < g.cols(); ++j) s += g(i, j) * av(i, j);
        gc(i, 0) += s;
      }
    }
  });
}

Var mul_scalar(Var a, Var s) {
  const double sv = s.value().item();
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= sv;
  check_finite(out, "mul_scalar");
  return a.tape().record(std::move(out), {a, s}, [a, s](Tape& t, const Tensor&, const Tensor& g) {
    const double sv = t.value(s)[0];
    if (t.requires_grad(a)) {
      auto& ga = t.grad_buffer(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * sv;
    }
    if (t.requires_grad(s)) {
      const auto& av = t.value(a);
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * av[i];
      t.grad_buffer(s)[0] += acc;
    }
  });
}

Var scale(Var a, double s) {
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
  check_finite(out, "scale");
  return a.tape().record(std::move(out), {a}, [a, s](Tape& t, const Tensor&, const Tensor& g) {
    auto& ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s;
  });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeMismatch("concat_rows: no inputs");
  Tape& tape = parts.front().tape();
  const auto cols = parts.front().value().cols();
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.value().cols() != cols) throw ShapeMismatch("concat_rows: column mismatch");
    rows += p.value().rows();
  }
  Tensor out(rows, cols);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    const auto& v = p.value();
    std::copy(v.data().begin(), v.data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(offset * cols));
    offset += v.rows();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return tape.record(std::move(out), parts, [inputs](Tape& t, const Tensor&, const Tensor& g) {
    std::size_t offset = 0;
    for (const auto& p : inputs) {
      const auto n = t.value(p).size();
      if (t.requires_grad(p)) {
        auto& gp = t.grad_buffer(p);
        for (std::size_t i = 0; i < n; ++i) gp[i] += g[offset + i];
      }
      offset += n;
    }
  });
}

Var concat_cols(Var a, Var b) {
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.rows() != bv.rows()) throw ShapeMismatch("concat_cols: " + shape_str(av) + " | " + shape_str(bv));
  const auto ca = av.cols(), cb = bv.cols();
  Tensor out(av.rows(), ca + cb);
  for (std::size_t i = 0; i < av.rows(); ++i) {
    std::copy(av.row(i).begin(), av.row(i).end(), out.row(i).begin());
    std::copy(bv.row(i).begin(), bv.row(i).end(), out.row(i).begin() + static_cast<std::ptrdiff_t>(ca));
  }
  return a.tape().record(std::move(out), {a, b}, [a, b, ca, cb](Tape& t, const Tensor&, const Tensor& g) {
    if (t.requires_grad(a)) {
      auto& ga = t.grad_buffer(a);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < ca; ++j) ga(i, j) += g(i, j);
    }
    if (t.requires_grad(b)) {
      auto& gb = t.grad_buffer(b);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < cb; ++j) gb(i, j) += g(i, ca + j);
    }
  });
}

Var leaky_relu(Var a, double slope) {
  Tensor out = map(a.value(), [slope](double x) { return x > 0 ? x : slope * x; });
  return a.tape().record(std::move(out), {a}, [a, slope](Tape& t, const Tensor&, const Tensor& g) {
    const auto& av = t.value(a);
    auto& ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (av[i] > 0 ? 1.0 : slope);
  });
}

Var elu(Var a, double alpha) {
  Tensor out = map(a.value(), [alpha](double x) { return x > 0 ? x : alpha * std::expm1(x); });
  return a.tape().record(std::move(out), {a}, [a, alpha](Tape& t, const Tensor& y, const Tensor& g) {
    const auto& av = t.value(a);
    auto& ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (av[i] > 0 ? 1.0 : y[i] + alpha);
  });
}

Var sigmoid(Var a) {
  Tensor out = map(a.value(), [](double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  });
  return a.tape().record(std::move(out), {a}, [a](Tape& t, const Tensor& y, const Tensor& g) {
    auto& ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var sum(Var a) {
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  return a.tape().record(Tensor::scalar(s), {a}, [a](Tape& t, const Tensor&, const Tensor& g) {
    auto& ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[0];
  });
}

Var mean(Var a) {
  const auto n = a.value().size();
  if (n == 0) throw ShapeMismatch("mean of an empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

Var gather_rows(Var table, std::vector<std::size_t> indices) {
  const auto& tv = table.value();
  const auto d = tv.cols();
  Tensor out(indices.size(), d);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= tv.rows()) {
      throw ShapeMismatch("gather_rows: index " + std::to_string(indices[i]) + " into " + shape_str(tv));
    }
    std::copy(tv.row(indices[i]).begin(), tv.row(indices[i]).end(), out.row(i).begin());
  }
  return table.tape().record(std::move(out), {table},
                             [table, idx = std::move(indices)](Tape& t, const Tensor&, const Tensor& g) {
                               auto& gt = t.grad_buffer(table);
                               const auto d = g.cols();
                               for (std::size_t i = 0; i < idx.size(); ++i) {
                                 double* dst = gt.row(idx[i]).data();
                                 const double* src = g.row(i).data();
                                 for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
                               }
                             });
}

Var segment_softmax(Var logits, std::vector<std::size_t> segment_of, std::size_t num_segments) {
  const auto& lv = logits.value();
  if (lv.cols() != 1) throw ShapeMismatch("segment_softmax expects a column, got " + shape_str(lv));
  check_segments(segment_of, lv.rows(), num_segments, "segment_softmax");
  std::vector<double> seg_max(num_segments, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> count(num_segments, 0);
  for (std::size_t e = 0; e < lv.rows(); ++e) {
    seg_max[segment_of[e]] = std::max(seg_max[segment_of[e]], lv[e]);
    ++count[segment_of[e]];
  }
  for (std::size_t s = 0; s < num_segments; ++s) {
    if (count[s] == 0) throw EmptySegment("segment " + std::to_string(s) + " has no members");
  }
  Tensor out(lv.rows(), 1);
  std::vector<double> denom(num_segments, 0.0);
  for (std::size_t e = 0; e < lv.rows(); ++e) {
    out[e] = std::exp(lv[e] - seg_max[segment_of[e]]);
    denom[segment_of[e]] += out[e];
  }
  for (std::size_t e = 0; e < lv.rows(); ++e) out[e] /= denom[segment_of[e]];
  check_finite(out, "segment_softmax");
  return logits.tape().record(
      std::move(out), {logits},
      [logits, seg = std::move(segment_of), num_segments](Tape& t, const Tensor& y, const Tensor& g) {
        // d logit_e = y_e * (g_e - sum_{f in seg(e)} g_f y_f)
        std::vector<double> dot(num_segments, 0.0);
        for (std::size_t e = 0; e < y.rows(); ++e) dot[seg[e]] += g[e] * y[e];
        auto& gl = t.grad_buffer(logits);
        for (std::size_t e = 0; e < y.rows(); ++e) gl[e] += y[e] * (g[e] - dot[seg[e]]);
      });
}

Var segment_sum(Var values, std::vector<std::size_t> segment_of, std::size_t num_segments) {
  const auto& vv = values.value();
  check_segments(segment_of, vv.rows(), num_segments, "segment_sum");
  const auto d = vv.cols();
  Tensor out(num_segments, d);
  for (std::size_t e = 0; e < vv.rows(); ++e) {
    double* dst = out.row(segment_of[e]).data();
    const double* src = vv.row(e).data();
    for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
  }
  check_finite(out, "segment_sum");
  return values.tape().record(std::move(out), {values},
                              [values, seg = std::move(segment_of)](Tape& t, const Tensor&, const Tensor& g) {
                                auto& gv = t.grad_buffer(values);
                                const auto d = g.cols();
                                for (std::size_t e = 0; e < seg.size(); ++e) {
                                  double* dst = gv.row(e).data();
                                  const double* src = g.row(seg[e]).data();
                                  for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
                                }
                              });
}

Var segment_mean(Var values, std::vector<std::size_t> segment_of, std::size_t num_segments) {
  check_segments(segment_of, values.value().rows(), num_segments, "segment_mean");
  std::vector<double> count(num_segments, 0.0);
  for (auto s : segment_of) count[s] += 1.0;
  Tensor inv(num_segments, 1);
  for (std::size_t s = 0; s < num_segments; ++s) {
    if (count[s] == 0) throw EmptySegment("segment " + std::to_string(s) + " has no members");
    inv[s] = 1.0 / count[s];
  }
  auto summed = segment_sum(values, std::move(segment_of), num_segments);
  return mul_col(summed, values.tape().constant(std::move(inv)));
}

Var dropout(Var x, double p, bool training, std::uint64_t seed) {
  if (!(p >= 0.0 && p < 1.0)) throw BadProbability("dropout probability " + std::to_string(p));
  if (!training || p == 0.0) return x;
  const auto& xv = x.value();
  std::mt19937_64 rng(seed);
  Tensor mask(xv.rows(), xv.cols());
  const double keep_scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    mask[i] = u < p ? 0.0 : keep_scale;
  }
  Tensor out = xv;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return x.tape().record(std::move(out), {x}, [x, m = std::move(mask)](Tape& t, const Tensor&, const Tensor& g) {
    auto& gx = t.grad_buffer(x);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * m[i];
  });
}

Var mse(Var prediction, const Tensor& target) {
  require_same_shape(prediction.value(), target, "mse");
  if (target.size() == 0) throw LengthMismatch("mse over zero items");
  auto diff = sub(prediction, prediction.tape().constant(target));
  return mean(mul(diff, diff));
}

void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, AdamState& state,
               const AdamOptions& options) {
  if (params.size() != grads.size()) throw ShapeMismatch("adam: parameter and gradient counts differ");
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.rows(), p.cols());
      state.v.emplace_back(p.rows(), p.cols());
    }
  }
  if (state.m.size() != params.size()) throw ShapeMismatch("adam: state does not match parameters");
  for (std::size_t k = 0; k < params.size(); ++k) {
    require_same_shape(params[k], grads[k], "adam");
    require_same_shape(params[k], state.m[k], "adam");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double bc1 = 1.0 - std::pow(options.beta1, t);
  const double bc2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& p = params[k];
    const auto& g = grads[k];
    auto& m = state.m[k];
    auto& v = state.v[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = options.beta1 * m[i] + (1.0 - options.beta1) * g[i];
      v[i] = options.beta2 * v[i] + (1.0 - options.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      p[i] -= options.lr * m_hat / (std::sqrt(v_hat) + options.eps);
    }
  }
}

}  // namespace layoutrank::tensor
