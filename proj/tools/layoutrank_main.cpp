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

// layoutrank command line. Exit codes: 0 ok, 2 usage, 3 data error,
// 4 schema or version error, 1 anything else.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <json.hpp>

#include "layoutrank/checkpoint.hpp"
#include "layoutrank/errors.hpp"
#include "layoutrank/featurizer.hpp"
#include "layoutrank/layout_graph.hpp"
#include "layoutrank/metrics.hpp"
#include "layoutrank/pipeline.hpp"
#include "layoutrank/synth.hpp"
#include "layoutrank/trainer.hpp"
#include "layoutrank/util.hpp"

namespace fs = std::filesystem;
using namespace layoutrank;

namespace {

void log(const std::string& msg) { std::cerr << "layoutrank: " << msg << "\n"; }

dom::Viewport parse_viewport(const std::string& text) {
  auto parts = split(text, 'x');
  if (parts.size() != 2) throw DataError("viewport must look like 1280x2000");
  try {
    dom::Viewport v{std::stod(parts[0]), std::stod(parts[1])};
    if (!(v.width > 0 && v.height > 0)) throw DataError("viewport must be positive");
    return v;
  } catch (const std::logic_error&) {
    throw DataError("viewport must look like 1280x2000");
  }
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string input;
  std::string source = "html";
  std::string viewport = "1280x2000";
  std::string url;
  std::string category = "unknown";
  std::string out;
  std::string trees_out;
  std::size_t threads = 0;
};

int run_ingest(const IngestArgs& a) {
  const auto viewport = parse_viewport(a.viewport);
  fs::path input(a.input);
  std::vector<graph::LayoutGraph> graphs;
  std::vector<dom::DomTree> trees;
  const bool want_trees = !a.trees_out.empty();
  if (fs::is_directory(input) || input.filename() == "index.tsv") {
    const auto index_path = fs::is_directory(input) ? input / "index.tsv" : input;
    const auto index = pipeline::read_index(index_path);
    const auto src = a.source == "prerendered" ? pipeline::IngestSource::Prerendered : pipeline::IngestSource::Html;
    graphs = pipeline::ingest_index(index, src, viewport, a.threads);
    if (want_trees) {
      for (const auto& e : index) {
        trees.push_back(src == pipeline::IngestSource::Html
                            ? dom::estimate_geometry(dom::parse_html(read_file(e.html), e.url, e.category), viewport)
                            : dom::load_prerendered(e.prerendered));
      }
    }
  } else {
    const auto url = a.url.empty() ? input.filename().string() : a.url;
    dom::DomTree tree;
    if (input.extension() == ".jsonl") {
      tree = dom::load_prerendered(input);
      if (!a.url.empty()) tree.source_url = a.url;
      if (a.category != "unknown") tree.category = a.category;
    } else {
      tree = dom::estimate_geometry(dom::parse_html(read_file(input), url, a.category), viewport);
    }
    graphs.push_back(graph::build_layout_graph(tree));
    if (want_trees) trees.push_back(std::move(tree));
  }
  graph::write_graphs(a.out, graphs);
  if (want_trees) {
    std::string text;
    for (const auto& t : trees) text += dom::export_prerendered(t);
    write_file(a.trees_out, text);
  }
  log("ingested " + std::to_string(graphs.size()) + " documents into " + a.out);
  return 0;
}

// ---------------------------------------------------------------- fit-buckets

struct FitArgs {
  std::string graphs;
  std::string labels;
  std::string splits;
  std::string split = "train";
  std::string out;
  features::FitOptions options;
};

int run_fit(const FitArgs& a) {
  auto graphs = graph::read_graphs(a.graphs);
  if (!a.splits.empty()) {
    const auto splits = pipeline::read_splits(a.splits);
    std::erase_if(graphs, [&](const graph::LayoutGraph& g) {
      auto it = splits.find(g.url);
      return it == splits.end() || it->second != a.split;
    });
  }
  auto schema = features::fit_buckets(graphs, a.options);
  schema.save(a.out);
  log("fitted " + std::to_string(schema.features.size()) + " features on " + std::to_string(graphs.size()) +
      " graphs, schema " + schema.hash());
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string mix = "rich:0.3,thin:0.4,chaotic:0.3";
  std::size_t categories = 5;
  std::size_t n = 2000;
  std::uint64_t seed = 7;
  std::string out;
  bool emit_prerendered = false;
  std::vector<double> category_weights;
  std::size_t queries = 20;
  std::string viewport = "1280x2000";
};

int run_synth(const SynthArgs& a) {
  synth::SynthSpec spec;
  spec.n = a.n;
  spec.categories = a.categories;
  spec.mix = synth::ProfileMix::parse(a.mix);
  spec.seed = a.seed;
  spec.category_weights = a.category_weights;
  spec.viewport = parse_viewport(a.viewport);
  const auto docs = synth::generate(spec);
  synth::CorpusLayout layout;
  layout.emit_prerendered = a.emit_prerendered;
  layout.num_queries = a.queries;
  synth::write_corpus(a.out, docs, layout, a.seed);
  log("wrote " + std::to_string(docs.size()) + " documents to " + a.out);
  return 0;
}

// ---------------------------------------------------------------- train / ablate

struct ModelArgs {
  std::string family = "Virt-GAT";
  std::size_t dim = 0;  // 0: schema embedding dim
  std::size_t layers = 5;
  double dropout = 0.2;
  double leaky_slope = 0.2;
  std::size_t heads = 1;
  bool linear_head = false;
};

struct DataArgs {
  std::string graphs;
  std::string schema;
  std::string labels;
  std::string splits;
  std::string train_split = "train";
  std::string eval_split = "eval";
  std::string test_split = "test";
};

struct TrainArgs {
  DataArgs data;
  ModelArgs model;
  double lr = 1e-4;
  std::size_t batch_size = 32;
  std::size_t epochs = 25;
  std::uint64_t seed = 1;
  bool no_upsample = false;
  std::string out;
  std::string log_path;
};

train::TrainConfig make_train_config(const TrainArgs& a, const features::FeatureSchema& schema) {
  train::TrainConfig c;
  c.lr = a.lr;
  c.batch_size = a.batch_size;
  c.epochs = a.epochs;
  c.seed = a.seed;
  c.upsample = !a.no_upsample;
  c.model = model::from_family(a.model.family);
  c.model.dim = a.model.dim ? a.model.dim : schema.embedding_dim;
  c.model.layers = a.model.layers;
  c.model.dropout = a.model.dropout;
  c.model.leaky_slope = a.model.leaky_slope;
  c.model.heads = a.model.heads;
  c.model.sigmoid_head = !a.model.linear_head;
  return c;
}

struct LoadedData {
  features::FeatureSchema schema;
  std::vector<train::LabeledExample> train, eval, test;
};

LoadedData load_data(const DataArgs& a) {
  LoadedData d;
  d.schema = features::FeatureSchema::load(a.schema);
  const auto graphs = graph::read_graphs(a.graphs);
  const auto labels = pipeline::read_labels(a.labels);
  const auto splits = a.splits.empty() ? std::map<std::string, std::string>{} : pipeline::read_splits(a.splits);
  if (splits.empty()) {
    d.train = pipeline::make_examples(graphs, d.schema, labels);
  } else {
    d.train = pipeline::make_examples(graphs, d.schema, labels, splits, a.train_split);
    d.eval = pipeline::make_examples(graphs, d.schema, labels, splits, a.eval_split);
    d.test = pipeline::make_examples(graphs, d.schema, labels, splits, a.test_split);
  }
  return d;
}

int run_train(const TrainArgs& a) {
  auto data = load_data(a.data);
  const auto config = make_train_config(a, data.schema);
  log("training " + config.model.family() + " d=" + std::to_string(config.model.dim) + " K=" +
      std::to_string(config.model.layers) + " on " + std::to_string(data.train.size()) + " examples");
  auto result = train::train(data.train, data.eval, data.schema, config, [](const train::EpochLog& e) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "epoch %zu loss %.6f eval_auc %.4f eval_pnr %.4f (%.1fs)", e.epoch, e.train_loss,
                  e.eval_auc, e.eval_pnr, e.seconds);
    log(buf);
  });
  for (const auto& w : result.warnings) log("warning: " + w);
  result.checkpoint.save(a.out);
  if (!a.log_path.empty()) write_file(a.log_path, train::log_to_csv(result.log));
  log("saved checkpoint from epoch " + std::to_string(result.checkpoint.epoch) + " to " + a.out);
  return 0;
}

struct AblateArgs {
  TrainArgs base;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<std::string> families;
  std::vector<std::size_t> layer_sweep = {1, 3, 5, 7};
  std::size_t threads = 0;
};

int run_ablate(const AblateArgs& a) {
  auto data = load_data(a.base.data);
  train::AblationPlan plan;
  plan.seeds = a.seeds;
  if (!a.families.empty()) plan.families = a.families;
  plan.layer_sweep = a.layer_sweep;
  plan.threads = a.threads;
  const auto config = make_train_config(a.base, data.schema);
  const auto started = std::chrono::steady_clock::now();
  auto table = train::run_ablation(data.train, data.eval, data.test, data.schema, config, plan);
  write_file(a.base.out, table.to_json() + "\n");
  std::cout << pipeline::render_ablation(table);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  log("ablation finished in " + std::to_string(secs) + "s, table at " + a.base.out);
  return 0;
}

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string graphs;
  std::string schema;
  std::string checkpoint;
  std::string out;
  std::size_t threads = 0;
};

int run_score(const ScoreArgs& a) {
  const auto schema = features::FeatureSchema::load(a.schema);
  const auto checkpoint = Checkpoint::load(a.checkpoint);
  const auto graphs = graph::read_graphs(a.graphs);
  const auto started = std::chrono::steady_clock::now();
  const auto store = pipeline::score_batch(graphs, schema, checkpoint, a.threads);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  store.save(a.out);
  char buf[128];
  std::snprintf(buf, sizeof buf, "scored %zu graphs in %.2fs (%.1f graphs/s)", graphs.size(), secs,
                secs > 0 ? static_cast<double>(graphs.size()) / secs : 0.0);
  log(buf);
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvalArgs {
  std::string scores;
  std::string labels;
  std::string splits;
  std::string split;
  std::string judgments;
  std::size_t p = 4;
  double threshold = 0.5;
  std::string out;
};

int run_evaluate(const EvalArgs& a) {
  const auto store = pipeline::ScoreStore::load(a.scores);
  const auto labels = pipeline::read_labels(a.labels);
  const auto splits = a.splits.empty() ? std::map<std::string, std::string>{} : pipeline::read_splits(a.splits);
  std::vector<double> scores;
  std::vector<int> ys;
  for (const auto& e : store.entries()) {
    auto it = labels.find(e.url);
    if (it == labels.end()) continue;
    if (!a.split.empty()) {
      auto s = splits.find(e.url);
      if (s == splits.end() || s->second != a.split) continue;
    }
    scores.push_back(e.score);
    ys.push_back(it->second);
  }
  auto report = metrics::evaluate(scores, ys, a.threshold);
  if (!a.judgments.empty()) {
    std::vector<metrics::Judgment> judgments;
    for (const auto& list : pipeline::parse_lists(read_file(a.judgments))) {
      metrics::Judgment j{list.query, {}};
      for (const auto& r : list.results) j.rels.push_back(r.rel_grade);
      judgments.push_back(std::move(j));
    }
    report.dcg = metrics::dcg_at(judgments, a.p);
  }
  const auto text = report.to_json();
  if (a.out.empty()) {
    std::cout << text << "\n";
  } else {
    write_file(a.out, text + "\n");
    log("evaluated " + std::to_string(scores.size()) + " items: AUC " + std::to_string(report.auc) + ", PNR " +
        report.pnr.to_string());
  }
  return 0;
}

// ---------------------------------------------------------------- rerank-sim

struct RerankArgs {
  std::string lists;
  std::string store;
  double weight = 0.5;
  std::string out;
  std::string report;
};

int run_rerank(const RerankArgs& a) {
  const auto store = pipeline::ScoreStore::load(a.store);
  const auto lists = pipeline::parse_lists(read_file(a.lists));
  auto result = pipeline::rerank_sim(lists, [&](std::string_view url) { return store.lookup(url); }, a.weight);
  for (const auto& w : result.report.warnings) log("warning: " + w);
  if (!a.out.empty()) write_file(a.out, pipeline::lists_to_jsonl(result.lists));
  const auto text = result.report.to_json();
  if (a.report.empty()) {
    std::cout << text << "\n";
  } else {
    write_file(a.report, text + "\n");
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "mean DCG %.4f -> %.4f (%+.4f), %zu position changes", result.report.mean_before,
                result.report.mean_after, result.report.mean_delta(), result.report.changes.size());
  log(buf);
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string eval;
  std::string baseline;
  std::string ablation;
  std::string out;
};

int run_report(const ReportArgs& a) {
  std::string table;
  std::string json_text;
  if (!a.ablation.empty()) {
    const auto t = train::AblationTable::from_json(read_file(a.ablation));
    table = pipeline::render_ablation(t);
    json_text = t.to_json();
  } else {
    if (a.eval.empty() || a.baseline.empty()) throw DataError("report needs --eval and --baseline, or --ablation");
    const auto rows = pipeline::compare_reports(read_file(a.eval), read_file(a.baseline));
    table = pipeline::render_deltas(rows);
    json_text = pipeline::deltas_to_json(rows);
  }
  std::cout << table;
  if (!a.out.empty()) write_file(a.out, json_text + "\n");
  return 0;
}

void add_data_options(CLI::App* cmd, DataArgs& d) {
  cmd->add_option("--graphs", d.graphs, "Layout graphs (JSONL)")->required();
  cmd->add_option("--schema", d.schema, "Feature schema from fit-buckets")->required();
  cmd->add_option("--labels", d.labels, "url<TAB>label file")->required();
  cmd->add_option("--splits", d.splits, "url<TAB>split file");
  cmd->add_option("--train-split", d.train_split, "Split used for training");
  cmd->add_option("--eval-split", d.eval_split, "Split used for model selection");
  cmd->add_option("--test-split", d.test_split, "Held-out split");
}

void add_train_options(CLI::App* cmd, TrainArgs& t) {
  add_data_options(cmd, t.data);
  cmd->add_option("--family", t.model.family, "GIN, GAT, Virt-GIN or Virt-GAT, optional -NC suffix");
  cmd->add_option("--dim", t.model.dim, "Embedding width d (default: schema)");
  cmd->add_option("--layers", t.model.layers, "Number of layers K");
  cmd->add_option("--dropout", t.model.dropout, "Dropout between layers");
  cmd->add_option("--leaky-slope", t.model.leaky_slope, "LeakyReLU slope in attention");
  cmd->add_option("--heads", t.model.heads, "Attention heads per layer");
  cmd->add_flag("--linear-head", t.model.linear_head, "Raw linear score instead of sigmoid");
  cmd->add_option("--lr", t.lr, "Adam learning rate");
  cmd->add_option("--batch-size", t.batch_size, "Mini-batch size");
  cmd->add_option("--epochs", t.epochs, "Training epochs");
  cmd->add_option("--seed", t.seed, "Random seed");
  cmd->add_flag("--no-upsample", t.no_upsample, "Disable category-aware up-sampling");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"layoutrank: webpage quality assessment from layout graphs"};
  app.set_config("--config", "", "Key-value config file; flags override it");
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Parse HTML or pre-rendered trees into layout graphs");
  c_ingest->add_option("--input", ingest.input, "HTML file, pre-rendered .jsonl, corpus dir or index.tsv")->required();
  c_ingest->add_option("--source", ingest.source, "html or prerendered (corpus input)")
      ->check(CLI::IsMember({"html", "prerendered"}));
  c_ingest->add_option("--viewport", ingest.viewport, "WIDTHxHEIGHT");
  c_ingest->add_option("--url", ingest.url, "Url of a single input file");
  c_ingest->add_option("--category", ingest.category, "Category of a single input file");
  c_ingest->add_option("--out", ingest.out, "Output graphs (JSONL)")->required();
  c_ingest->add_option("--trees-out", ingest.trees_out, "Also write DOM trees in the pre-rendered format");
  c_ingest->add_option("--threads", ingest.threads, "Worker threads (0: all cores)");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit-buckets", "Fit bucket boundaries and vocabularies");
  c_fit->add_option("--graphs", fit.graphs, "Layout graphs (JSONL)")->required();
  c_fit->add_option("--splits", fit.splits, "Restrict fitting to one split");
  c_fit->add_option("--split", fit.split, "Split to fit on");
  c_fit->add_option("--out", fit.out, "Output schema (JSON)")->required();
  c_fit->add_option("--min-count", fit.options.min_count, "Minimum occupancy per bucket or token");
  c_fit->add_option("--quantiles", fit.options.num_quantiles, "Requested buckets per continuous feature");
  c_fit->add_option("--dim", fit.options.embedding_dim, "Embedding width recorded in the schema");

  SynthArgs syn;
  auto* c_synth = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
  c_synth->add_option("--profile-mix", syn.mix, "e.g. rich:0.3,thin:0.4,chaotic:0.3");
  c_synth->add_option("--categories", syn.categories, "Number of categories");
  c_synth->add_option("--n", syn.n, "Number of documents");
  c_synth->add_option("--seed", syn.seed, "Random seed");
  c_synth->add_option("--out", syn.out, "Output directory")->required();
  c_synth->add_flag("--emit-prerendered", syn.emit_prerendered, "Also write pre-rendered node files");
  c_synth->add_option("--category-weights", syn.category_weights, "Relative category sizes")->delimiter(',');
  c_synth->add_option("--queries", syn.queries, "Synthetic ranked lists to write");
  c_synth->add_option("--viewport", syn.viewport, "WIDTHxHEIGHT");

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Train a quality model");
  add_train_options(c_train, tr);
  c_train->add_option("--out", tr.out, "Output checkpoint")->required();
  c_train->add_option("--log", tr.log_path, "Per-epoch CSV log");

  AblateArgs ab;
  auto* c_ablate = app.add_subcommand("ablate", "Family x seed grid plus the layer sweep");
  add_train_options(c_ablate, ab.base);
  c_ablate->add_option("--out", ab.base.out, "Output table (JSON)")->required();
  c_ablate->add_option("--seeds", ab.seeds, "Seeds")->delimiter(',');
  c_ablate->add_option("--families", ab.families, "Families to compare")->delimiter(',');
  c_ablate->add_option("--layer-sweep", ab.layer_sweep, "Layer counts for the sweep")->delimiter(',');
  c_ablate->add_option("--threads", ab.threads, "Parallel training runs (0: all cores)");

  ScoreArgs sc;
  auto* c_score = app.add_subcommand("score", "Score graphs into a score store");
  c_score->add_option("--graphs", sc.graphs, "Layout graphs (JSONL)")->required();
  c_score->add_option("--schema", sc.schema, "Feature schema")->required();
  c_score->add_option("--checkpoint", sc.checkpoint, "Model checkpoint")->required();
  c_score->add_option("--out", sc.out, "Output score store (TSV)")->required();
  c_score->add_option("--threads", sc.threads, "Worker threads (0: all cores)");

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("evaluate", "PNR, AUC, P/R/F1 and optional DCG");
  c_eval->add_option("--scores", ev.scores, "Score store")->required();
  c_eval->add_option("--labels", ev.labels, "url<TAB>label file")->required();
  c_eval->add_option("--splits", ev.splits, "url<TAB>split file");
  c_eval->add_option("--split", ev.split, "Only evaluate this split");
  c_eval->add_option("--judgments", ev.judgments, "Ranked lists with rel_grade (JSONL)");
  c_eval->add_option("--p", ev.p, "DCG cutoff");
  c_eval->add_option("--threshold", ev.threshold, "Decision threshold for P/R/F1");
  c_eval->add_option("--out", ev.out, "Output report (JSON); stdout when omitted");

  RerankArgs rr;
  auto* c_rerank = app.add_subcommand("rerank-sim", "Blend quality into ranked lists");
  c_rerank->add_option("--lists", rr.lists, "Ranked lists (JSONL)")->required();
  c_rerank->add_option("--store", rr.store, "Score store")->required();
  c_rerank->add_option("--weight", rr.weight, "Quality weight w in [0,1]");
  c_rerank->add_option("--out", rr.out, "Reranked lists (JSONL)");
  c_rerank->add_option("--report", rr.report, "DCG and position-change report (JSON)");

  ReportArgs rp;
  auto* c_report = app.add_subcommand("report", "Delta table against a baseline, or an ablation table");
  c_report->add_option("--eval", rp.eval, "Evaluation report");
  c_report->add_option("--baseline", rp.baseline, "Baseline evaluation report");
  c_report->add_option("--ablation", rp.ablation, "Ablation table from ablate");
  c_report->add_option("--out", rp.out, "Output JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_ingest) return run_ingest(ingest);
    if (*c_fit) return run_fit(fit);
    if (*c_synth) return run_synth(syn);
    if (*c_train) return run_train(tr);
    if (*c_ablate) return run_ablate(ab);
    if (*c_score) return run_score(sc);
    if (*c_eval) return run_evaluate(ev);
    if (*c_rerank) return run_rerank(rr);
    if (*c_report) return run_report(rp);
  } catch (const VersionError& e) {
    log(std::string("error: ") + e.what());
    return 4;
  } catch (const DataError& e) {
    log(std::string("error: ") + e.what());
    return 3;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return 1;
  }
  return 2;
}
