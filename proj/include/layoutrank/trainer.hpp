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

#ifndef LAYOUTRANK_TRAINER_HPP
#define LAYOUTRANK_TRAINER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "layoutrank/checkpoint.hpp"
#include "layoutrank/featurizer.hpp"
#include "layoutrank/metrics.hpp"
#include "layoutrank/model.hpp"

namespace layoutrank::train {

struct LabeledExample {
  std::shared_ptr<const features::EncodedGraph> graph;
  int label = 0;
  std::string category;
};

struct UpsampleResult {
  std::vector<LabeledExample> examples;
  std::vector<std::string> warnings;  // one per category left unbalanced
};

// Within each category, draws the minority label with replacement until both
// labels have the majority count, then shuffles. Categories holding a single
// label pass through unchanged with a MissingClass warning.
UpsampleResult upsample(std::span<const LabeledExample> dataset, std::uint64_t seed);

// (1/P) sum (y - s)^2. Throws LengthMismatch on unequal or empty inputs.
double mse_loss(std::span<const double> scores, std::span<const double> labels);

struct TrainConfig {
  double lr = 1e-4;
  std::size_t batch_size = 32;
  std::size_t epochs = 25;
  std::uint64_t seed = 1;
  bool upsample = true;
  model::ModelConfig model;  // dim, layers and dropout live here
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double eval_pnr = 0.0;  // +inf or NaN for the non-finite PNR outcomes
  double eval_auc = 0.0;
  double seconds = 0.0;
};

std::string log_to_csv(std::span<const EpochLog> log);

struct TrainResult {
  Checkpoint checkpoint;  // parameters of the best eval-AUC epoch
  std::vector<EpochLog> log;
  std::vector<std::string> warnings;
};

using ProgressFn = std::function<void(const EpochLog&)>;

// Mini-batch Adam on the MSE loss. A single-label training set trains with a
// MissingClass warning. Throws Diverged on a non-finite loss.
TrainResult train(std::span<const LabeledExample> train_set, std::span<const LabeledExample> eval_set,
                  const features::FeatureSchema& schema, const TrainConfig& config,
                  const ProgressFn& progress = {});

// Eval-mode scores in input order, computed in batches across threads.
std::vector<double> score_all(std::span<const features::EncodedGraph* const> graphs,
                              const model::ModelParams& params, const model::ModelConfig& config,
                              std::size_t threads = 0);
std::vector<double> score_examples(std::span<const LabeledExample> examples, const model::ModelParams& params,
                                   const model::ModelConfig& config, std::size_t threads = 0);

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for one value
  std::vector<double> values;
};

MetricSummary summarize(std::vector<double> values);

struct AblationRow {
  std::string family;
  std::size_t layers = 0;
  MetricSummary pnr, auc, precision1, recall1, f1_1, precision0, recall0, f1_0;
};

struct AblationTable {
  std::vector<AblationRow> rows;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> notes;  // orderings, reported descriptively

  std::string to_json() const;
  static AblationTable from_json(std::string_view text);
};

struct AblationPlan {
  std::vector<std::string> families = {"GIN", "Virt-GIN", "GAT", "Virt-GAT",
                                       "GIN-NC", "Virt-GIN-NC", "GAT-NC", "Virt-GAT-NC"};
  std::vector<std::size_t> layer_sweep = {1, 3, 5, 7};
  std::string sweep_family = "Virt-GAT";
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::size_t threads = 0;  // 0: hardware concurrency
};

// Trains every (family, seed) and (sweep K, seed) pair and reports test
// metrics. Throws DataError without seeds.
AblationTable run_ablation(std::span<const LabeledExample> train_set, std::span<const LabeledExample> eval_set,
                           std::span<const LabeledExample> test_set, const features::FeatureSchema& schema,
                           const TrainConfig& base, const AblationPlan& plan);

}  // namespace layoutrank::train

#endif  // LAYOUTRANK_TRAINER_HPP
