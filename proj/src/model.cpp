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

#include "layoutrank/model.hpp"

#include <cassert>
#include <cmath>
#include <random>

#include "layoutrank/errors.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::model {

using tensor::Tape;
using tensor::Tensor;
using tensor::Var;

std::string_view to_string(Arch arch) { return arch == Arch::GAT ? "GAT" : "GIN"; }
std::string_view to_string(Readout readout) {
  return readout == Readout::Virtual ? "virtual" : "mean_pool";
}

std::string ModelConfig::family() const {
  std::string name = readout == Readout::Virtual ? "Virt-" : "";
  name += to_string(arch);
  if (!use_category) name += "-NC";
  return name;
}

ModelConfig from_family(std::string_view family, ModelConfig base) {
  std::string_view rest = family;
  base.use_category = true;
  if (rest.size() > 3 && rest.substr(rest.size() - 3) == "-NC") {
    base.use_category = false;
    rest.remove_suffix(3);
  }
  base.readout = Readout::MeanPool;
  if (rest.starts_with("Virt-")) {
    base.readout = Readout::Virtual;
    rest.remove_prefix(5);
  }
  if (rest == "GAT") {
    base.arch = Arch::GAT;
  } else if (rest == "GIN") {
    base.arch = Arch::GIN;
  } else {
    throw DataError("unknown model family '" + std::string(family) + "'");
  }
  return base;
}

// ---------------------------------------------------------------- params

void ModelParams::add(std::string name, Tensor value) {
  if (index_.contains(name)) throw DataError("duplicate parameter " + name);
  index_.emplace(name, tensors_.size());
  names_.push_back(std::move(name));
  tensors_.push_back(std::move(value));
}

bool ModelParams::contains(std::string_view name) const { return index_.find(name) != index_.end(); }

Tensor& ModelParams::get(std::string_view name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw DataError("missing parameter " + std::string(name));
  return tensors_[it->second];
}

const Tensor& ModelParams::get(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw DataError("missing parameter " + std::string(name));
  return tensors_[it->second];
}

std::vector<Tensor> ModelParams::feature_tables(const features::FeatureSchema& schema) const {
  std::vector<Tensor> out;
  for (const auto& f : schema.features) out.push_back(get("emb." + f.name));
  return out;
}

namespace {

std::string layer_prefix(std::size_t k) { return "layer" + std::to_string(k); }

std::string head_prefix(std::size_t k, std::size_t h, std::size_t heads) {
  auto p = layer_prefix(k);
  if (heads > 1) p += ".head" + std::to_string(h);
  return p;
}

Tensor glorot(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> u(-limit, limit);
  Tensor t(rows, cols);
  for (auto& x : t.data()) x = u(rng);
  return t;
}

Tensor normal(std::size_t rows, std::size_t cols, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, stddev);
  Tensor t(rows, cols);
  for (auto& x : t.data()) x = n(rng);
  return t;
}

}  // namespace

ModelParams ModelParams::init(const ModelConfig& config, const features::FeatureSchema& schema,
                              std::uint64_t seed) {
  if (config.dim == 0 || config.layers == 0 || config.heads == 0) {
    throw DataError("model dimension, layer count and head count must be positive");
  }
  const std::size_t d = config.dim;
  std::mt19937_64 rng(mix_seed(seed, 0x6d6f64656cULL));
  ModelParams p;
  // unit variance for the summed input embedding
  const double emb_std = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(schema.features.size(), 1)));
  for (const auto& f : schema.features) p.add("emb." + f.name, normal(f.table_size(), d, emb_std, rng));
  p.add("virtual_init", normal(1, d, 1.0, rng));
  for (std::size_t k = 0; k < config.layers; ++k) {
    if (config.arch == Arch::GAT) {
      for (std::size_t h = 0; h < config.heads; ++h) {
        const auto prefix = head_prefix(k, h, config.heads);
        p.add(prefix + ".W1", glorot(d, d, rng));
        p.add(prefix + ".W2", glorot(d, d, rng));
        p.add(prefix + ".W3", glorot(1, 2 * d, rng));
      }
    } else {
      p.add(layer_prefix(k) + ".eps", Tensor(1, 1, 0.0));
      p.add(layer_prefix(k) + ".mlp_a", glorot(d, d, rng));
      p.add(layer_prefix(k) + ".mlp_b", glorot(d, d, rng));
    }
  }
  if (config.use_category) {
    p.add("category_emb", normal(schema.category_vocab.table_size(), d, 0.1, rng));
  }
  p.add("readout_W", Tensor(1, d, 0.0));
  p.add("readout_b", Tensor(1, 1, 0.0));
  return p;
}

// ---------------------------------------------------------------- batching

Batch make_batch(std::span<const features::EncodedGraph* const> graphs) {
  Batch b;
  b.num_graphs = graphs.size();
  const std::size_t num_features = graphs.empty() || graphs.front()->node_indices.empty()
                                       ? 0
                                       : graphs.front()->node_indices.front().size();
  b.feature_columns.assign(num_features, {});
  std::size_t offset = b.num_graphs;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& g = *graphs[gi];
    if (g.num_nodes < 2 || g.node_indices.size() + 1 != g.num_nodes) {
      throw ShapeMismatch("graph " + g.url + " has inconsistent node count");
    }
    auto global = [&](std::size_t local) { return local == 0 ? gi : offset + local - 1; };
    for (const auto& [s, t] : g.edges) {
      if (s >= g.num_nodes || t >= g.num_nodes) throw ShapeMismatch("edge out of range in " + g.url);
      b.src.push_back(global(s));
      b.dst.push_back(global(t));
    }
    for (const auto& row : g.node_indices) {
      if (row.size() != num_features) throw ShapeMismatch("feature count differs in " + g.url);
      for (std::size_t f = 0; f < num_features; ++f) b.feature_columns[f].push_back(row[f]);
      b.content_graph.push_back(gi);
    }
    b.categories.push_back(g.category);
    offset += g.num_nodes - 1;
  }
  b.num_nodes = offset;
  return b;
}

Batch make_batch(const features::EncodedGraph& graph) {
  const features::EncodedGraph* one[] = {&graph};
  return make_batch(std::span<const features::EncodedGraph* const>(one));
}

// ---------------------------------------------------------------- layers

Var gat_aggregate(Var h, const Batch& batch, const LayerWeights& w, double leaky_slope, Var* alpha) {
  auto wh1 = matmul_nt(h, w.W1);
  auto wh2 = matmul_nt(h, w.W2);
  auto pair = concat_cols(gather_rows(wh2, batch.dst), gather_rows(wh2, batch.src));
  auto logits = leaky_relu(matmul_nt(pair, w.W3), leaky_slope);
  auto a = segment_softmax(logits, batch.dst, batch.num_nodes);
  if (alpha) *alpha = a;
  return segment_sum(mul_col(gather_rows(wh1, batch.src), a), batch.dst, batch.num_nodes);
}

Var gat_layer(Var h, const Batch& batch, std::span<const LayerWeights> heads, double leaky_slope,
              std::vector<Var>* alphas) {
  if (heads.empty()) throw ShapeMismatch("gat_layer needs at least one head");
  Var total;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    Var a;
    auto out = gat_aggregate(h, batch, heads[i], leaky_slope, &a);
    if (alphas) alphas->push_back(a);
    total = i == 0 ? out : add(total, out);
  }
  if (heads.size() > 1) total = scale(total, 1.0 / static_cast<double>(heads.size()));
  return elu(total);
}

Var gin_layer(Var h, const Batch& batch, Var eps, Var mlp_a, Var mlp_b) {
  auto neighbors = segment_sum(gather_rows(h, batch.src), batch.dst, batch.num_nodes);
  auto self = add(h, mul_scalar(h, eps));
  auto z = add(self, neighbors);
  return elu(matmul_nt(elu(matmul_nt(z, mlp_a)), mlp_b));
}

// ---------------------------------------------------------------- forward

ForwardResult forward(Tape& tape, const Batch& batch, const ModelParams& params, const ModelConfig& config,
                      Mode mode, std::uint64_t dropout_seed) {
  ForwardResult r;
  for (const auto& t : params.tensors()) r.params.push_back(tape.variable(t));
  auto var = [&](std::string_view name) {
    const auto& names = params.names();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return r.params[i];
    }
    throw DataError("missing parameter " + std::string(name));
  };

  // h^(0): summed feature embeddings for content rows, virtual_init for virtual rows
  Var content;
  std::size_t f = 0;
  for (std::size_t i = 0; i < params.names().size(); ++i) {
    if (!params.names()[i].starts_with("emb.")) continue;
    if (f >= batch.feature_columns.size()) throw ShapeMismatch("more embedding tables than features");
    auto rows = gather_rows(r.params[i], batch.feature_columns[f]);
    content = f == 0 ? rows : add(content, rows);
    ++f;
  }
  if (f != batch.feature_columns.size()) throw ShapeMismatch("embedding tables do not match features");
  auto virtual_rows = gather_rows(var("virtual_init"), std::vector<std::size_t>(batch.num_graphs, 0));
  Var parts[] = {virtual_rows, content};
  Var h = concat_rows(parts);

  const bool training = mode == Mode::Train;
  for (std::size_t k = 0; k < config.layers; ++k) {
    if (k > 0) h = dropout(h, config.dropout, training, mix_seed(dropout_seed, k));
    if (config.arch == Arch::GAT) {
      std::vector<LayerWeights> heads;
      for (std::size_t hd = 0; hd < config.heads; ++hd) {
        const auto prefix = head_prefix(k, hd, config.heads);
        heads.push_back({var(prefix + ".W1"), var(prefix + ".W2"), var(prefix + ".W3")});
      }
      h = gat_layer(h, batch, heads, config.leaky_slope, &r.attention);
    } else {
      const auto prefix = layer_prefix(k);
      h = gin_layer(h, batch, var(prefix + ".eps"), var(prefix + ".mlp_a"), var(prefix + ".mlp_b"));
    }
  }

  std::vector<std::size_t> graph_rows(batch.num_graphs);
  for (std::size_t g = 0; g < batch.num_graphs; ++g) graph_rows[g] = g;
  Var rep;
  if (config.readout == Readout::Virtual) {
    rep = gather_rows(h, graph_rows);
  } else {
    std::vector<std::size_t> content_rows(batch.num_nodes - batch.num_graphs);
    for (std::size_t i = 0; i < content_rows.size(); ++i) content_rows[i] = batch.num_graphs + i;
    rep = segment_mean(gather_rows(h, std::move(content_rows)), batch.content_graph, batch.num_graphs);
  }
  if (config.use_category) rep = add(rep, gather_rows(var("category_emb"), batch.categories));
  auto s = add_row(matmul_nt(rep, var("readout_W")), var("readout_b"));
  r.scores = config.sigmoid_head ? sigmoid(s) : s;
  return r;
}

double score(const features::EncodedGraph& graph, const ModelParams& params, const ModelConfig& config) {
  Tape tape;
  auto r = forward(tape, make_batch(graph), params, config, Mode::Eval);
  return r.scores.value()[0];
}

}  // namespace layoutrank::model
