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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numeric>

#include "layoutrank/metrics.hpp"
#include "layoutrank/pipeline.hpp"
#include "layoutrank/synth.hpp"
#include "layoutrank/trainer.hpp"
#include "layoutrank/util.hpp"
#include "oracles.hpp"

using namespace layoutrank;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int failures = 0;

template <typename Fn>
void criterion(int id, const char* name, double budget_seconds, Fn fn) {
  const auto start = Clock::now();
  Outcome out;
  try {
    fn(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (budget_seconds > 0) out.require(secs < budget_seconds, "over the time budget");
  std::printf("%s %d %s (%.2fs)%s%s\n", out.ok ? "PASS" : "FAIL", id, name, secs, out.detail.empty() ? "" : ": ",
              out.detail.c_str());
  std::fflush(stdout);
  failures += out.ok ? 0 : 1;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

model::ModelConfig config_for(std::string_view family, std::size_t dim, std::size_t layers) {
  auto c = model::from_family(family);
  c.dim = dim;
  c.layers = layers;
  return c;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / (name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct Dataset {
  features::FeatureSchema schema;
  std::vector<train::LabeledExample> train, eval, test;
};

Dataset synth_dataset(std::size_t n, std::uint64_t seed, std::size_t dim) {
  synth::SynthSpec spec;
  spec.n = n;
  spec.seed = seed;
  const auto docs = synth::generate(spec);
  std::vector<graph::LayoutGraph> graphs;
  std::map<std::string, int> labels;
  std::map<std::string, std::string> splits;
  for (const auto& d : docs) {
    graphs.push_back(pipeline::ingest_html(d.html, d.url, d.category, spec.viewport));
    labels[d.url] = d.label;
  }
  const auto s = synth::split(docs, {}, seed);
  for (auto i : s.train) splits[docs[i].url] = "train";
  for (auto i : s.eval) splits[docs[i].url] = "eval";
  for (auto i : s.test) splits[docs[i].url] = "test";
  std::vector<graph::LayoutGraph> fit_on;
  for (auto i : s.train) fit_on.push_back(graphs[i]);
  features::FitOptions opt;
  opt.embedding_dim = dim;
  Dataset ds;
  ds.schema = features::fit_buckets(fit_on, opt);
  ds.train = pipeline::make_examples(graphs, ds.schema, labels, splits, "train");
  ds.eval = pipeline::make_examples(graphs, ds.schema, labels, splits, "eval");
  ds.test = pipeline::make_examples(graphs, ds.schema, labels, splits, "test");
  return ds;
}

void gradcheck_virt_gat(Outcome& out) {
  oracle::Rng rng(101);
  auto fx = oracle::make_fixture(rng, {5}, 8);
  const auto& g = fx.encoded[0];
  out.require(g.num_nodes == 6, "graph does not have 6 nodes");
  const auto c = config_for("Virt-GAT", 8, 2);
  auto p = model::ModelParams::init(c, fx.schema, 3);
  oracle::randomize(p, rng, 0.8);
  const auto batch = model::make_batch(g);
  const tensor::Tensor target(1, 1, {1.0});
  auto loss_of = [&](const std::vector<tensor::Tensor>& ts, std::vector<tensor::Tensor>* grads) {
    model::ModelParams q;
    for (std::size_t i = 0; i < ts.size(); ++i) q.add(p.names()[i], ts[i]);
    tensor::Tape tape;
    auto r = model::forward(tape, batch, q, c, model::Mode::Eval);
    auto loss = tensor::mse(r.scores, target);
    if (grads) {
      tape.backward(loss);
      for (auto v : r.params) grads->push_back(tape.grad(v));
    }
    return loss.value().item();
  };
  std::vector<tensor::Tensor> ts(p.tensors().begin(), p.tensors().end()), grads;
  loss_of(ts, &grads);
  auto rep = oracle::gradcheck(ts, [&](const std::vector<tensor::Tensor>& x) { return loss_of(x, nullptr); }, grads);
  out.require(rep.max_rel_error < 1e-4, rep.worst);
  out.detail = fmt("max relative error %.3g over %.0f entries", rep.max_rel_error, static_cast<double>(rep.entries));
}

void alg1_fidelity(Outcome& out) {
  oracle::Rng rng(202);
  for (int i = 0; i < 1000; ++i) {
    auto tree = oracle::random_tree(rng, 1 + oracle::pick(rng, 50));
    auto g = graph::build_layout_graph(tree);
    auto [nodes, edges] = oracle::alg1(tree);
    std::set<std::pair<std::size_t, std::size_t>> got(g.edges.begin(), g.edges.end());
    out.require(g.num_nodes == nodes.size(), "node count differs on tree " + std::to_string(i));
    out.require(got == edges, "edge set differs on tree " + std::to_string(i));
    std::size_t virtual_degree = 0;
    for (auto [s, t] : g.edges) virtual_degree += s == 0;
    out.require(virtual_degree == g.num_nodes - 1, "virtual degree on tree " + std::to_string(i));
  }
  out.detail = "1000 trees";
}

void metric_oracles(Outcome& out) {
  const std::vector<double> s = {0.9, 0.4, 0.6, 0.1};
  const std::vector<int> y = {1, 1, 0, 0};
  out.require(metrics::pnr(s, y).value == 3.0, "PNR hand case");
  out.require(std::abs(metrics::dcg(std::vector<int>{3, 2, 0, 1}, 4) - 9.3234) <= 1e-3, "DCG hand case");
  out.require(std::abs(metrics::gsb({3, 5, 2}) - 0.1) <= 1e-12, "GSB hand case");
  oracle::Rng rng(303);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> sc;
    std::vector<int> lb;
    const std::size_t n = 2 + oracle::pick(rng, 40);
    for (std::size_t i = 0; i < n; ++i) {
      sc.push_back(static_cast<double>(oracle::pick(rng, 12)) / 11.0);
      lb.push_back(static_cast<int>(rng() % 2));
    }
    lb[0] = 1;
    lb[1] = 0;
    double c, d, tied;
    oracle::pairs(sc, lb, c, d, tied);
    const auto r = metrics::pnr(sc, lb);
    out.require(r.pairs.concordant == c && r.pairs.discordant == d && r.pairs.tied == tied, "PNR pair counts");
    if (d > 0) out.require(std::abs(r.value - c / d) <= 1e-9, "PNR value");
    out.require(std::abs(metrics::auc(sc, lb) - oracle::auc(sc, lb)) <= 1e-9, "AUC value");
  }
  for (int t = 0; t < 200; ++t) {
    std::vector<int> rels;
    const std::size_t len = 1 + oracle::pick(rng, 12);
    for (std::size_t i = 0; i < len; ++i) rels.push_back(static_cast<int>(oracle::pick(rng, 5)));
    const std::size_t p = 1 + oracle::pick(rng, len);
    out.require(std::abs(metrics::dcg(rels, p) - oracle::dcg(rels, p)) <= 1e-9, "DCG value");
  }
  for (int t = 0; t < 200; ++t) {
    metrics::GsbCounts k{oracle::pick(rng, 20), oracle::pick(rng, 20), oracle::pick(rng, 20) + 1};
    const double want = (static_cast<double>(k.good) - static_cast<double>(k.bad)) /
                        static_cast<double>(k.good + k.same + k.bad);
    out.require(std::abs(metrics::gsb(k) - want) <= 1e-9, "GSB value");
  }
  out.detail = "PNR, AUC, DCG and GSB on 200 instances each";
}

void invariances(Outcome& out) {
  oracle::Rng rng(404);
  auto fx = oracle::make_fixture(rng, {12, 20, 7, 7, 7, 7, 7}, 8);
  double worst_perm = 0.0, worst_row = 0.0;
  for (auto family : {"GAT", "Virt-GAT-NC", "Virt-GAT"}) {
    const auto c = config_for(family, 8, 3);
    auto p = model::ModelParams::init(c, fx.schema, 2);
    oracle::randomize(p, rng, 0.5);
    for (const auto& g : fx.encoded) {
      std::vector<std::size_t> perm(g.num_nodes - 1);
      std::iota(perm.begin(), perm.end(), 0);
      for (int t = 0; t < 10; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto pg = oracle::permute(g, perm);
        worst_perm = std::max(worst_perm, std::abs(model::score(g, p, c) - model::score(pg, p, c)));
      }
    }
  }
  out.require(worst_perm <= 1e-10, fmt("permutation deviation %.3g", worst_perm));

  for (const auto& g : fx.encoded) {
    tensor::Tape tape;
    const auto batch = model::make_batch(g);
    auto mat = [&](std::size_t r, std::size_t c) {
      tensor::Tensor t(r, c);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = oracle::uniform(rng, -1, 1);
      return tape.constant(t);
    };
    tensor::Var alpha;
    model::gat_aggregate(mat(g.num_nodes, 8), batch, {mat(8, 8), mat(8, 8), mat(1, 16)}, 0.2, &alpha);
    std::vector<double> rows(g.num_nodes, 0.0);
    for (std::size_t e = 0; e < batch.dst.size(); ++e) rows[batch.dst[e]] += alpha.value()[e];
    for (double r : rows) worst_row = std::max(worst_row, std::abs(r - 1.0));
  }
  out.require(worst_row <= 1e-12, fmt("attention row deviation %.3g", worst_row));

  out.require(fx.schema.category_vocab.table_size() >= 3, "fixture has fewer than two categories");
  auto a = fx.encoded[2];
  auto b = a;
  a.category = 1;
  b.category = 2;
  bool independent = true, sensitive = true;
  for (auto family : {"GAT-NC", "Virt-GAT-NC", "GIN-NC", "Virt-GIN-NC"}) {
    const auto c = config_for(family, 8, 2);
    auto p = model::ModelParams::init(c, fx.schema, 5);
    oracle::randomize(p, rng, 0.5);
    independent = independent && model::score(a, p, c) == model::score(b, p, c);
  }
  for (auto family : {"GAT", "Virt-GAT", "GIN", "Virt-GIN"}) {
    const auto c = config_for(family, 8, 2);
    auto p = model::ModelParams::init(c, fx.schema, 5);
    oracle::randomize(p, rng, 0.5);
    sensitive = sensitive && model::score(a, p, c) != model::score(b, p, c);
  }
  out.require(independent, "score depends on category with use_category=false");
  out.require(sensitive, "score ignores category with use_category=true");
  out.detail = fmt("permutation %.2g, attention rows %.2g", worst_perm, worst_row);
}

void end_to_end_quality(Outcome& out) {
  const auto ds = synth_dataset(2000, 7, 64);
  train::TrainConfig cfg;
  cfg.model = model::from_family("Virt-GAT");
  cfg.model.dim = 64;
  cfg.model.layers = 5;
  cfg.model.dropout = 0.2;
  cfg.batch_size = 32;
  cfg.lr = 1e-4;
  cfg.epochs = 25;
  auto result = train::train(ds.train, ds.eval, ds.schema, cfg);
  const auto scores = train::score_examples(ds.test, result.checkpoint.params, result.checkpoint.config);
  std::vector<int> labels;
  for (const auto& ex : ds.test) labels.push_back(ex.label);
  const auto report = metrics::evaluate(scores, labels);
  const double pnr = report.pnr.as_double();
  out.require(report.auc >= 0.90, fmt("AUC %.4f", report.auc));
  out.require(pnr >= 3.0, fmt("PNR %.4f", pnr));
  out.detail = fmt("held-out AUC %.4f PNR %.4g", report.auc, pnr) +
               fmt(" on %.0f docs after %.0f epochs", static_cast<double>(ds.test.size()),
                   static_cast<double>(result.log.size()));
}

void ablation_grid(Outcome& out) {
  const auto ds = synth_dataset(600, 11, 16);
  train::TrainConfig cfg;
  cfg.model.dim = 16;
  cfg.model.layers = 5;
  cfg.lr = 3e-3;
  cfg.epochs = 4;
  train::AblationPlan plan;
  const auto table = train::run_ablation(ds.train, ds.eval, ds.test, ds.schema, cfg, plan);
  out.require(table.rows.size() == plan.families.size() + plan.layer_sweep.size(), "row count");
  for (const auto& row : table.rows) {
    out.require(row.auc.values.size() == plan.seeds.size(), row.family + " missing seeds");
    std::printf("  %-12s K=%zu AUC %.4f +- %.4f  PNR %.4g +- %.4g\n", row.family.c_str(), row.layers, row.auc.mean,
                row.auc.std, row.pnr.mean, row.pnr.std);
  }
  for (const auto& note : table.notes) std::printf("  %s\n", note.c_str());
  out.detail = fmt("%.0f rows x %.0f seeds, ordering logged", static_cast<double>(table.rows.size()),
                   static_cast<double>(plan.seeds.size()));
}

void upsample_balance(Outcome& out) {
  oracle::Rng rng(707);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<train::LabeledExample> set;
    const std::size_t cats = 1 + oracle::pick(rng, 6);
    for (std::size_t c = 0; c < cats; ++c) {
      const std::size_t pos = 1 + oracle::pick(rng, 30), neg = 1 + oracle::pick(rng, 30);
      for (std::size_t i = 0; i < pos + neg; ++i) {
        set.push_back({std::make_shared<features::EncodedGraph>(), i < pos ? 1 : 0, "c" + std::to_string(c)});
      }
    }
    std::shuffle(set.begin(), set.end(), rng);
    const auto r = train::upsample(set, rng());
    std::map<std::pair<std::string, int>, std::size_t> before, after;
    for (const auto& ex : set) ++before[{ex.category, ex.label}];
    for (const auto& ex : r.examples) ++after[{ex.category, ex.label}];
    for (std::size_t c = 0; c < cats; ++c) {
      const auto name = "c" + std::to_string(c);
      const auto target = std::max(before[{name, 0}], before[{name, 1}]);
      out.require(after[{name, 0}] == target && after[{name, 1}] == target, "unbalanced " + name);
    }
    std::set<const features::EncodedGraph*> seen;
    for (const auto& ex : r.examples) seen.insert(ex.graph.get());
    for (const auto& ex : set) out.require(seen.contains(ex.graph.get()), "example lost");
  }
  out.detail = "100 corpora";
}

int run(const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); }

void reproducibility_and_rerank(Outcome& out) {
  const auto dir = temp_dir("lr_accept");
  const std::string cli = LAYOUTRANK_CLI;
  const auto corpus = (dir / "corpus").string();
  out.require(run(cli + " synth --n 300 --seed 5 --queries 20 --out " + corpus) == 0, "synth failed");
  std::string stores[2];
  for (int k = 0; k < 2; ++k) {
    const auto r = dir / ("run" + std::to_string(k));
    std::filesystem::create_directories(r);
    const auto g = (r / "graphs.jsonl").string(), s = (r / "schema.json").string(), ck = (r / "model.ckpt").string();
    out.require(run(cli + " ingest --input " + corpus + " --out " + g) == 0, "ingest failed");
    out.require(run(cli + " fit-buckets --graphs " + g + " --splits " + corpus + "/splits.tsv --split train --dim 16 --out " + s) == 0,
                "fit-buckets failed");
    out.require(run(cli + " train --graphs " + g + " --schema " + s + " --labels " + corpus + "/labels.tsv --splits " + corpus +
                    "/splits.tsv --dim 16 --layers 2 --epochs 2 --lr 3e-3 --out " + ck) == 0,
                "train failed");
    out.require(run(cli + " score --graphs " + g + " --schema " + s + " --checkpoint " + ck + " --out " +
                    (r / "scores.tsv").string()) == 0,
                "score failed");
    stores[k] = read_file(r / "scores.tsv");
  }
  out.require(!stores[0].empty() && stores[0] == stores[1], "score stores differ between runs");
  for (auto name : {"graphs.jsonl", "schema.json", "model.ckpt"}) {
    out.require(read_file(dir / "run0" / name) == read_file(dir / "run1" / name), std::string(name) + " differs");
  }

  const auto store = pipeline::ScoreStore::parse(stores[0]);
  const auto lists = pipeline::parse_lists(read_file(dir / "corpus" / "lists.jsonl"));
  auto lookup = [&](std::string_view u) { return store.lookup(u); };
  out.require(pipeline::rerank_sim(lists, lookup, 0.0).lists == lists, "w=0 is not the identity");

  const std::vector<pipeline::RankedList> swap = {{"q", {{"low", 0.5, 2}, {"high", 0.5, 2}}}};
  std::map<std::string, double> q = {{"low", 0.2415}, {"high", 0.5623}};
  auto swapped = pipeline::rerank_sim(swap, [&](std::string_view u) -> std::optional<double> { return q.at(std::string(u)); }, 1.0);
  out.require(swapped.lists[0].results[0].url == "high", "swap case not reordered");
  std::filesystem::remove_all(dir);
  out.detail = fmt("%.0f stored scores identical across runs", static_cast<double>(store.size()));
}

}  // namespace

int main() {
  criterion(1, "gradcheck Virt-GAT K=2 d=8", 10, gradcheck_virt_gat);
  criterion(2, "layout graph construction fidelity", 5, alg1_fidelity);
  criterion(3, "metric oracles", 0, metric_oracles);
  criterion(4, "invariances", 0, invariances);
  criterion(5, "end-to-end quality Virt-GAT d=64 K=5", 1800, end_to_end_quality);
  criterion(6, "ablation grid and layer sweep", 0, ablation_grid);
  criterion(7, "category up-sampling balance", 0, upsample_balance);
  criterion(8, "reproducibility and rerank", 0, reproducibility_and_rerank);
  return failures == 0 ? 0 : 1;
}
