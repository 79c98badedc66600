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

#ifndef LAYOUTRANK_MODEL_HPP
#define LAYOUTRANK_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layoutrank/featurizer.hpp"
#include "layoutrank/tensor.hpp"

namespace layoutrank::model {

enum class Arch { GAT, GIN };
enum class Readout { MeanPool, Virtual };

struct ModelConfig {
  Arch arch = Arch::GAT;
  Readout readout = Readout::Virtual;
  bool use_category = true;
  std::size_t dim = 64;
  std::size_t layers = 5;
  double dropout = 0.2;
  double leaky_slope = 0.2;
  std::size_t heads = 1;
  bool sigmoid_head = true;  // false: raw linear score

  // "GIN", "Virt-GIN", "GAT", "Virt-GAT", each optionally suffixed "-NC".
  std::string family() const;
};

// Applies a family name to arch/readout/use_category of base. Throws DataError.
ModelConfig from_family(std::string_view family, ModelConfig base = ModelConfig());

std::string_view to_string(Arch arch);
std::string_view to_string(Readout readout);

// Every learnable tensor, by name, in a fixed registration order:
//   emb.<feature>            [table_size, d]
//   virtual_init             [1, d]
//   layer<k>[.head<h>].W1/W2 [d, d], .W3 [1, 2d]      (GAT)
//   layer<k>.eps [1,1], layer<k>.mlp_a/mlp_b [d, d]    (GIN)
//   category_emb             [category table size, d]  (use_category)
//   readout_W [1, d], readout_b [1, 1]
class ModelParams {
 public:
  static ModelParams init(const ModelConfig& config, const features::FeatureSchema& schema,
                          std::uint64_t seed);

  void add(std::string name, tensor::Tensor value);
  bool contains(std::string_view name) const;
  tensor::Tensor& get(std::string_view name);
  const tensor::Tensor& get(std::string_view name) const;

  const std::vector<std::string>& names() const { return names_; }
  std::span<tensor::Tensor> tensors() { return tensors_; }
  std::span<const tensor::Tensor> tensors() const { return tensors_; }
  std::size_t size() const { return tensors_.size(); }
  // Tables in schema feature order.
  std::vector<tensor::Tensor> feature_tables(const features::FeatureSchema& schema) const;

  bool operator==(const ModelParams& other) const {
    return names_ == other.names_ && tensors_ == other.tensors_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<tensor::Tensor> tensors_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Disjoint union of graphs. Rows [0, num_graphs) hold the virtual nodes,
// followed by each graph's DOM nodes in order.
struct Batch {
  std::size_t num_graphs = 0;
  std::size_t num_nodes = 0;
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  std::vector<std::vector<std::size_t>> feature_columns;  // [feature][content node]
  std::vector<std::size_t> content_graph;                 // graph of each content node
  std::vector<std::size_t> categories;
};

Batch make_batch(std::span<const features::EncodedGraph* const> graphs);
Batch make_batch(const features::EncodedGraph& graph);

enum class Mode { Train, Eval };

struct LayerWeights {
  tensor::Var W1, W2, W3;
};

// One attention head: for every node n,
//   out_n = sum_{m -> n} alpha_nm W1 h_m,
//   alpha_n. = softmax over incoming edges of LeakyReLU(W3 [W2 h_n || W2 h_m]).
// The caller applies the activation. `alpha` receives the [E,1] weights.
tensor::Var gat_aggregate(tensor::Var h, const Batch& batch, const LayerWeights& w, double leaky_slope,
                          tensor::Var* alpha = nullptr);

// ELU(mean over heads of gat_aggregate).
tensor::Var gat_layer(tensor::Var h, const Batch& batch, std::span<const LayerWeights> heads,
                      double leaky_slope, std::vector<tensor::Var>* alphas = nullptr);

// ELU(W_b ELU(W_a ((1 + eps) h_n + sum_{m -> n} h_m))).
tensor::Var gin_layer(tensor::Var h, const Batch& batch, tensor::Var eps, tensor::Var mlp_a,
                      tensor::Var mlp_b);

struct ForwardResult {
  tensor::Var scores;                      // [num_graphs, 1]
  std::vector<tensor::Var> params;         // tape handles, parallel to ModelParams
  std::vector<tensor::Var> attention;      // per layer and head, [E,1]
};

ForwardResult forward(tensor::Tape& tape, const Batch& batch, const ModelParams& params,
                      const ModelConfig& config, Mode mode, std::uint64_t dropout_seed = 0);

// Eval-mode score of one graph.
double score(const features::EncodedGraph& graph, const ModelParams& params, const ModelConfig& config);

}  // namespace layoutrank::model

#endif  // LAYOUTRANK_MODEL_HPP
