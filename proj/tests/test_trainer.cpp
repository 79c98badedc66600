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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "layoutrank/errors.hpp"
#include "layoutrank/metrics.hpp"
#include "layoutrank/pipeline.hpp"
#include "layoutrank/synth.hpp"
#include "layoutrank/trainer.hpp"
#include "layoutrank/util.hpp"
#include "oracles.hpp"

using namespace layoutrank;
using namespace layoutrank::train;

namespace {

std::vector<LabeledExample> make_set(const std::vector<std::pair<std::string, int>>& spec) {
  std::vector<LabeledExample> out;
  for (const auto& [cat, label] : spec) {
    auto g = std::make_shared<features::EncodedGraph>();
    g->url = "u" + std::to_string(out.size());
    out.push_back({g, label, cat});
  }
  return out;
}

std::map<std::pair<std::string, int>, std::size_t> counts(std::span<const LabeledExample> set) {
  std::map<std::pair<std::string, int>, std::size_t> c;
  for (const auto& ex : set) ++c[{ex.category, ex.label}];
  return c;
}

struct SynthData {
  features::FeatureSchema schema;
  std::vector<LabeledExample> train, eval, test;
};

SynthData synth_data(std::size_t n, std::uint64_t seed, std::size_t dim) {
  synth::SynthSpec spec;
  spec.n = n;
  spec.categories = 3;
  spec.seed = seed;
  const auto docs = synth::generate(spec);
  std::vector<graph::LayoutGraph> graphs;
  std::map<std::string, int> labels;
  for (const auto& d : docs) {
    graphs.push_back(pipeline::ingest_html(d.html, d.url, d.category, spec.viewport));
    labels[d.url] = d.label;
  }
  const auto parts = synth::split(docs, {}, seed);
  std::map<std::string, std::string> splits;
  for (auto i : parts.train) splits[docs[i].url] = "train";
  for (auto i : parts.eval) splits[docs[i].url] = "eval";
  for (auto i : parts.test) splits[docs[i].url] = "test";
  std::vector<graph::LayoutGraph> train_graphs;
  for (const auto& g : graphs) {
    if (splits[g.url] == "train") train_graphs.push_back(g);
  }
  SynthData out;
  features::FitOptions opt;
  opt.min_count = 5;
  opt.embedding_dim = dim;
  out.schema = features::fit_buckets(train_graphs, opt);
  out.train = pipeline::make_examples(graphs, out.schema, labels, splits, "train");
  out.eval = pipeline::make_examples(graphs, out.schema, labels, splits, "eval");
  out.test = pipeline::make_examples(graphs, out.schema, labels, splits, "test");
  return out;
}

}  // namespace

TEST_CASE("upsample hand cases") {
  SUBCASE("already balanced") {
    std::vector<std::pair<std::string, int>> spec;
    for (int i = 0; i < 10; ++i) spec.push_back({"A", 1});
    for (int i = 0; i < 10; ++i) spec.push_back({"A", 0});
    auto r = upsample(make_set(spec), 1);
    CHECK(r.examples.size() == 20);
    CHECK(r.warnings.empty());
  }
  SUBCASE("two positives, eight negatives") {
    std::vector<std::pair<std::string, int>> spec;
    for (int i = 0; i < 2; ++i) spec.push_back({"A", 1});
    for (int i = 0; i < 8; ++i) spec.push_back({"A", 0});
    auto r = upsample(make_set(spec), 1);
    CHECK(r.examples.size() == 16);
    auto c = counts(r.examples);
    CHECK(c[{"A", 1}] == 8);
    CHECK(c[{"A", 0}] == 8);
  }
  SUBCASE("single-label category passes through with a warning") {
    auto r = upsample(make_set({{"A", 1}, {"A", 1}, {"B", 0}, {"B", 1}, {"B", 1}}), 1);
    CHECK(r.warnings.size() == 1);
    auto c = counts(r.examples);
    CHECK(c[{"A", 1}] == 2);
    CHECK(c[{"B", 0}] == 2);
  }
}

TEST_CASE("upsample balances random corpora by recount") {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::string, int>> spec;
    const std::size_t cats = 1 + oracle::pick(rng, 4);
    for (std::size_t c = 0; c < cats; ++c) {
      const std::size_t pos = 1 + oracle::pick(rng, 20), neg = 1 + oracle::pick(rng, 20);
      for (std::size_t i = 0; i < pos; ++i) spec.push_back({"c" + std::to_string(c), 1});
      for (std::size_t i = 0; i < neg; ++i) spec.push_back({"c" + std::to_string(c), 0});
    }
    std::shuffle(spec.begin(), spec.end(), rng);
    const auto set = make_set(spec);
    auto r = upsample(set, rng());
    auto c = counts(r.examples);
    for (std::size_t k = 0; k < cats; ++k) {
      const auto name = "c" + std::to_string(k);
      CHECK(c[{name, 0}] == c[{name, 1}]);
    }
    std::set<const features::EncodedGraph*> seen;
    for (const auto& ex : r.examples) seen.insert(ex.graph.get());
    for (const auto& ex : set) CHECK(seen.contains(ex.graph.get()));
  }
  CHECK(upsample(make_set({{"A", 1}, {"A", 0}, {"A", 0}}), 5).examples.size() == 4);
}

TEST_CASE("mse loss") {
  CHECK(mse_loss(std::vector<double>{1, 0}, std::vector<double>{1, 0}) == 0.0);
  CHECK(mse_loss(std::vector<double>{0.5}, std::vector<double>{1}) == 0.25);
  oracle::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> s, y;
    double want = 0;
    for (int i = 0; i < 17; ++i) {
      s.push_back(oracle::uniform(rng, 0, 1));
      y.push_back(static_cast<double>(rng() % 2));
      want += (y.back() - s.back()) * (y.back() - s.back());
    }
    CHECK(std::abs(mse_loss(s, y) - want / 17) < 1e-12);
  }
  CHECK_THROWS_AS(mse_loss(std::vector<double>{1}, std::vector<double>{}), LengthMismatch);
}

TEST_CASE("zero epochs returns the initial parameters") {
  oracle::Rng rng(4);
  auto fx = oracle::make_fixture(rng, {4, 5}, 8);
  std::vector<LabeledExample> set;
  for (const auto& g : fx.encoded) set.push_back({std::make_shared<features::EncodedGraph>(g), 1, "x"});
  TrainConfig c;
  c.epochs = 0;
  c.model.dim = 8;
  c.model.layers = 2;
  auto r = train::train(set, {}, fx.schema, c);
  CHECK(r.log.empty());
  CHECK(r.checkpoint.params == model::ModelParams::init(c.model, fx.schema, mix_seed(c.seed, 1)));
  CHECK(r.checkpoint.epoch == 0);
}

TEST_CASE("a single example is fit and a single label only warns") {
  oracle::Rng rng(5);
  auto fx = oracle::make_fixture(rng, {6}, 8);
  std::vector<LabeledExample> set = {{std::make_shared<features::EncodedGraph>(fx.encoded[0]), 1, "x"}};
  TrainConfig c;
  c.epochs = 60;
  c.lr = 1e-2;
  c.model.dim = 8;
  c.model.layers = 2;
  c.model.dropout = 0.0;
  auto r = train::train(set, {}, fx.schema, c);
  CHECK(r.warnings.size() >= 1);
  CHECK(r.log.front().train_loss == doctest::Approx(0.25));
  CHECK(r.log.back().train_loss < 0.01);
  CHECK(model::score(fx.encoded[0], r.checkpoint.params, c.model) > 0.9);
}

TEST_CASE("training on a synthetic corpus separates the profiles") {
  auto data = synth_data(400, 11, 16);
  TrainConfig c;
  c.lr = 3e-3;
  c.epochs = 8;
  c.model.dim = 16;
  c.model.layers = 2;
  auto r = train::train(data.train, data.eval, data.schema, c);
  REQUIRE(r.log.size() == 8);
  CHECK(r.log.back().train_loss < r.log.front().train_loss);
  const auto scores = score_examples(data.test, r.checkpoint.params, c.model);
  std::vector<int> y;
  for (const auto& ex : data.test) y.push_back(ex.label);
  CHECK(metrics::auc(scores, y) >= 0.9);
  CHECK(r.checkpoint.eval_auc == doctest::Approx(std::max_element(r.log.begin(), r.log.end(), [](auto& a, auto& b) {
                                                   return a.eval_auc < b.eval_auc;
                                                 })->eval_auc));
  const auto csv = log_to_csv(r.log);
  CHECK(csv.starts_with("epoch,"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);

  SUBCASE("rerun with the same seed is identical") {
    auto again = train::train(data.train, data.eval, data.schema, c);
    CHECK(again.checkpoint.params == r.checkpoint.params);
  }
  SUBCASE("threaded scoring equals serial scoring") {
    CHECK(score_examples(data.test, r.checkpoint.params, c.model, 4) == scores);
    for (std::size_t i = 0; i < data.test.size(); ++i) {
      CHECK(scores[i] == model::score(*data.test[i].graph, r.checkpoint.params, c.model));
    }
  }
}

TEST_CASE("divergence is reported") {
  oracle::Rng rng(6);
  auto fx = oracle::make_fixture(rng, {6, 6}, 4);
  std::vector<LabeledExample> set = {{std::make_shared<features::EncodedGraph>(fx.encoded[0]), 1, "x"},
                                     {std::make_shared<features::EncodedGraph>(fx.encoded[1]), 0, "x"}};
  TrainConfig c;
  c.epochs = 3;
  c.model.dim = 4;
  c.model.layers = 1;
  c.model.sigmoid_head = false;
  c.lr = 1e300;
  CHECK_THROWS_AS(train::train(set, {}, fx.schema, c), Diverged);
}

TEST_CASE("ablation structure") {
  auto data = synth_data(160, 5, 8);
  TrainConfig base;
  base.lr = 3e-3;
  base.epochs = 2;
  base.model.dim = 8;
  base.model.layers = 2;

  SUBCASE("one family, one seed equals one training run") {
    AblationPlan plan;
    plan.families = {"GAT"};
    plan.layer_sweep = {};
    plan.seeds = {3};
    auto table = run_ablation(data.train, data.eval, data.test, data.schema, base, plan);
    REQUIRE(table.rows.size() == 1);
    auto cfg = base;
    cfg.model = model::from_family("GAT", base.model);
    cfg.seed = 3;
    auto r = train::train(data.train, data.eval, data.schema, cfg);
    std::vector<int> y;
    for (const auto& ex : data.test) y.push_back(ex.label);
    CHECK(table.rows[0].auc.mean == metrics::auc(score_examples(data.test, r.checkpoint.params, cfg.model), y));
    CHECK(table.rows[0].auc.std == 0.0);
  }
  SUBCASE("grid and sweep") {
    AblationPlan plan;
    plan.families = {"GIN", "GAT", "Virt-GAT"};
    plan.layer_sweep = {1, 3};
    plan.seeds = {1, 2};
    auto table = run_ablation(data.train, data.eval, data.test, data.schema, base, plan);
    CHECK(table.rows.size() == 5);
    for (const auto& row : table.rows) CHECK(row.auc.values.size() == 2);
    CHECK(table.rows[3].family == "Virt-GAT");
    CHECK(table.rows[3].layers == 1);
    CHECK_FALSE(table.notes.empty());
    auto back = AblationTable::from_json(table.to_json());
    CHECK(back.to_json() == table.to_json());
    CHECK(pipeline::render_ablation(table).find("Virt-GAT") != std::string::npos);
  }
  AblationPlan none;
  none.seeds = {};
  CHECK_THROWS_AS(run_ablation(data.train, data.eval, data.test, data.schema, base, none), DataError);
}

TEST_CASE("summaries") {
  auto s = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(summarize({7.0}).std == 0.0);
}
