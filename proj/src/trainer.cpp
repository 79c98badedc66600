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

#include "layoutrank/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <thread>

#include "layoutrank/errors.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::train {

using tensor::Tensor;

UpsampleResult upsample(std::span<const LabeledExample> dataset, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_category[2];
  std::vector<std::string> order;  // categories by first appearance
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& ex = dataset[i];
    if (ex.label != 0 && ex.label != 1) throw DataError("label " + std::to_string(ex.label) + " is not 0/1");
    if (!by_category[0].contains(ex.category) && !by_category[1].contains(ex.category)) {
      order.push_back(ex.category);
    }
    by_category[ex.label][ex.category].push_back(i);
  }
  UpsampleResult out;
  out.examples.assign(dataset.begin(), dataset.end());
  std::mt19937_64 rng(mix_seed(seed, 0x7570ULL));
  for (const auto& category : order) {
    auto neg = by_category[0].find(category);
    auto pos = by_category[1].find(category);
    if (neg == by_category[0].end() || pos == by_category[1].end()) {
      const int present = neg == by_category[0].end() ? 1 : 0;
      out.warnings.push_back(MissingClass("category '" + category + "' only has label " +
                                          std::to_string(present) + "; left unbalanced")
                                 .what());
      continue;
    }
    const auto& minority = neg->second.size() < pos->second.size() ? neg->second : pos->second;
    const auto target = std::max(neg->second.size(), pos->second.size());
    std::uniform_int_distribution<std::size_t> draw(0, minority.size() - 1);
    for (std::size_t k = minority.size(); k < target; ++k) out.examples.push_back(dataset[minority[draw(rng)]]);
  }
  std::shuffle(out.examples.begin(), out.examples.end(), rng);
  return out;
}

double mse_loss(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw LengthMismatch(std::to_string(scores.size()) + " scores vs " + std::to_string(labels.size()) + " labels");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double d = labels[i] - scores[i];
    total += d * d;
  }
  return total / static_cast<double>(scores.size());
}

std::string log_to_csv(std::span<const EpochLog> log) {
  std::string out = "epoch,train_loss,eval_pnr,eval_auc,seconds\n";
  char buf[160];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof buf, "%zu,%.8f,%.6f,%.6f,%.3f\n", e.epoch, e.train_loss, e.eval_pnr, e.eval_auc,
                  e.seconds);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------- scoring

std::vector<double> score_all(std::span<const features::EncodedGraph* const> graphs,
                              const model::ModelParams& params, const model::ModelConfig& config,
                              std::size_t threads) {
  constexpr std::size_t kChunk = 64;
  std::vector<double> out(graphs.size());
  const std::size_t chunks = (graphs.size() + kChunk - 1) / kChunk;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(chunks, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) {
        const auto begin = c * kChunk;
        const auto end = std::min(graphs.size(), begin + kChunk);
        tensor::Tape tape;
        auto r = model::forward(tape, model::make_batch(graphs.subspan(begin, end - begin)), params, config,
                                model::Mode::Eval);
        for (std::size_t i = begin; i < end; ++i) out[i] = r.scores.value()[i - begin];
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<double> score_examples(std::span<const LabeledExample> examples, const model::ModelParams& params,
                                   const model::ModelConfig& config, std::size_t threads) {
  std::vector<const features::EncodedGraph*> graphs;
  graphs.reserve(examples.size());
  for (const auto& ex : examples) graphs.push_back(ex.graph.get());
  return score_all(graphs, params, config, threads);
}

// ---------------------------------------------------------------- training

namespace {

struct EvalOutcome {
  bool defined = false;
  double auc = std::numeric_limits<double>::quiet_NaN();
  double pnr = std::numeric_limits<double>::quiet_NaN();
};

EvalOutcome evaluate_split(std::span<const LabeledExample> eval_set, const model::ModelParams& params,
                           const model::ModelConfig& config) {
  EvalOutcome out;
  std::vector<int> labels;
  for (const auto& ex : eval_set) labels.push_back(ex.label);
  const bool both = std::count(labels.begin(), labels.end(), 1) > 0 && std::count(labels.begin(), labels.end(), 0) > 0;
  if (!both) return out;
  const auto scores = score_examples(eval_set, params, config, 1);
  out.defined = true;
  out.auc = metrics::auc(scores, labels);
  out.pnr = metrics::pnr(scores, labels).as_double();
  return out;
}

}  // namespace

TrainResult train(std::span<const LabeledExample> train_set, std::span<const LabeledExample> eval_set,
                  const features::FeatureSchema& schema, const TrainConfig& config, const ProgressFn& progress) {
  if (config.batch_size == 0) throw DataError("batch size must be positive");
  if (!(config.lr > 0.0)) throw DataError("learning rate must be positive");
  bool has[2] = {false, false};
  for (const auto& ex : train_set) {
    if (ex.label != 0 && ex.label != 1) throw DataError("label " + std::to_string(ex.label) + " is not 0/1");
    has[ex.label] = true;
  }
  if (config.epochs > 0 && train_set.empty()) throw DataError("training set is empty");

  TrainResult result;
  if (config.epochs > 0 && !(has[0] && has[1])) {
    result.warnings.push_back(MissingClass("training set holds a single label").what());
  }
  auto params = model::ModelParams::init(config.model, schema, mix_seed(config.seed, 1));
  result.checkpoint.config = config.model;
  result.checkpoint.params = params;
  result.checkpoint.schema_hash = schema.hash();
  double best_auc = -std::numeric_limits<double>::infinity();

  tensor::AdamState adam;
  tensor::AdamOptions adam_options;
  adam_options.lr = config.lr;
  std::uint64_t step = 0;
  std::mt19937_64 shuffle_rng(mix_seed(config.seed, 2));

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::vector<LabeledExample> examples;
    if (config.upsample) {
      auto up = upsample(train_set, mix_seed(config.seed, 1000 + epoch));
      if (epoch == 1) result.warnings.insert(result.warnings.end(), up.warnings.begin(), up.warnings.end());
      examples = std::move(up.examples);
    } else {
      examples.assign(train_set.begin(), train_set.end());
      std::shuffle(examples.begin(), examples.end(), shuffle_rng);
    }

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < examples.size(); begin += config.batch_size) {
      const auto end = std::min(examples.size(), begin + config.batch_size);
      std::vector<const features::EncodedGraph*> graphs;
      Tensor target(end - begin, 1);
      for (std::size_t i = begin; i < end; ++i) {
        graphs.push_back(examples[i].graph.get());
        target(i - begin, 0) = examples[i].label;
      }
      tensor::Tape tape;
      auto r = model::forward(tape, model::make_batch(graphs), params, config.model, model::Mode::Train,
                              mix_seed(config.seed, 0x1000000ULL + step));
      auto loss = tensor::mse(r.scores, target);
      const double value = loss.value().item();
      if (!std::isfinite(value)) {
        throw Diverged("loss is " + std::to_string(value) + " at epoch " + std::to_string(epoch));
      }
      tape.backward(loss);
      std::vector<Tensor> grads;
      grads.reserve(r.params.size());
      for (auto v : r.params) grads.push_back(tape.grad(v));
      tensor::adam_step(params.tensors(), grads, adam, adam_options);
      loss_sum += value * static_cast<double>(end - begin);
      ++step;
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = examples.empty() ? 0.0 : loss_sum / static_cast<double>(examples.size());
    auto eval = evaluate_split(eval_set, params, config.model);
    entry.eval_auc = eval.auc;
    entry.eval_pnr = eval.pnr;
    entry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.log.push_back(entry);
    if (progress) progress(entry);

    // without a usable eval split the last epoch wins
    if (!eval.defined || eval.auc > best_auc) {
      best_auc = eval.defined ? eval.auc : best_auc;
      result.checkpoint.params = params;
      result.checkpoint.epoch = epoch;
      result.checkpoint.eval_auc = eval.defined ? eval.auc : 0.0;
    }
  }
  return result;
}

// ---------------------------------------------------------------- ablation

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  s.values = std::move(values);
  if (s.values.empty()) return s;
  double sum = 0.0;
  for (double v : s.values) sum += v;
  s.mean = sum / static_cast<double>(s.values.size());
  if (s.values.size() > 1) {
    double sq = 0.0;
    for (double v : s.values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(s.values.size() - 1));
  }
  if (!std::isfinite(s.mean)) s.std = std::numeric_limits<double>::quiet_NaN();
  return s;
}

namespace {

using nlohmann::json;

json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

json summary_json(const MetricSummary& s) {
  json values = json::array();
  for (double v : s.values) values.push_back(number_json(v));
  return {{"mean", number_json(s.mean)}, {"std", number_json(s.std)}, {"values", std::move(values)}};
}

MetricSummary summary_from_json(const json& j) {
  MetricSummary s;
  s.mean = number_from_json(j.at("mean"));
  s.std = number_from_json(j.at("std"));
  for (const auto& v : j.at("values")) s.values.push_back(number_from_json(v));
  return s;
}

struct RunMetrics {
  double pnr, auc, p1, r1, f1, p0, r0, f0;
};

RunMetrics run_once(std::span<const LabeledExample> train_set, std::span<const LabeledExample> eval_set,
                    std::span<const LabeledExample> test_set, const features::FeatureSchema& schema,
                    const TrainConfig& config) {
  auto result = train(train_set, eval_set, schema, config);
  const auto scores = score_examples(test_set, result.checkpoint.params, config.model, 1);
  std::vector<int> labels;
  for (const auto& ex : test_set) labels.push_back(ex.label);
  const auto report = metrics::evaluate(scores, labels);
  const auto& pr = report.prf1;
  return {report.pnr.as_double(), report.auc, pr.positive.precision, pr.positive.recall, pr.positive.f1,
          pr.negative.precision, pr.negative.recall, pr.negative.f1};
}

}  // namespace

std::string AblationTable::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"family", r.family},
                         {"layers", r.layers},
                         {"pnr", summary_json(r.pnr)},
                         {"auc", summary_json(r.auc)},
                         {"precision_1", summary_json(r.precision1)},
                         {"recall_1", summary_json(r.recall1)},
                         {"f1_1", summary_json(r.f1_1)},
                         {"precision_0", summary_json(r.precision0)},
                         {"recall_0", summary_json(r.recall0)},
                         {"f1_0", summary_json(r.f1_0)}});
  }
  json j;
  j["format"] = "layoutrank-ablation";
  j["seeds"] = seeds;
  j["rows"] = std::move(rows_json);
  j["notes"] = notes;
  return j.dump(2);
}

AblationTable AblationTable::from_json(std::string_view text) {
  AblationTable t;
  try {
    auto j = json::parse(text);
    if (j.value("format", "") != "layoutrank-ablation") throw DataError("not an ablation table");
    t.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    t.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      AblationRow row;
      row.family = r.at("family").get<std::string>();
      row.layers = r.at("layers").get<std::size_t>();
      row.pnr = summary_from_json(r.at("pnr"));
      row.auc = summary_from_json(r.at("auc"));
      row.precision1 = summary_from_json(r.at("precision_1"));
      row.recall1 = summary_from_json(r.at("recall_1"));
      row.f1_1 = summary_from_json(r.at("f1_1"));
      row.precision0 = summary_from_json(r.at("precision_0"));
      row.recall0 = summary_from_json(r.at("recall_0"));
      row.f1_0 = summary_from_json(r.at("f1_0"));
      t.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed ablation table: ") + e.what());
  }
  return t;
}

AblationTable run_ablation(std::span<const LabeledExample> train_set, std::span<const LabeledExample> eval_set,
                           std::span<const LabeledExample> test_set, const features::FeatureSchema& schema,
                           const TrainConfig& base, const AblationPlan& plan) {
  if (plan.seeds.empty()) throw DataError("ablation needs at least one seed");

  // one row per distinct (family, K); each row trains once per seed
  std::vector<std::pair<std::string, std::size_t>> row_keys;
  for (const auto& f : plan.families) row_keys.emplace_back(f, base.model.layers);
  for (auto k : plan.layer_sweep) row_keys.emplace_back(plan.sweep_family, k);
  std::vector<std::pair<std::string, std::size_t>> distinct;
  for (const auto& key : row_keys) {
    if (std::find(distinct.begin(), distinct.end(), key) == distinct.end()) distinct.push_back(key);
  }

  struct Job {
    std::size_t config_index;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < distinct.size(); ++c) {
    for (auto s : plan.seeds) jobs.push_back({c, s});
  }
  std::vector<RunMetrics> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        TrainConfig cfg = base;
        cfg.model = model::from_family(distinct[jobs[i].config_index].first, base.model);
        cfg.model.layers = distinct[jobs[i].config_index].second;
        cfg.seed = jobs[i].seed;
        results[i] = run_once(train_set, eval_set, test_set, schema, cfg);
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };
  std::size_t threads = plan.threads ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  AblationTable table;
  table.seeds = plan.seeds;
  for (const auto& key : row_keys) {
    const auto c = static_cast<std::size_t>(std::find(distinct.begin(), distinct.end(), key) - distinct.begin());
    std::vector<double> pnr, auc, p1, r1, f1, p0, r0, f0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].config_index != c) continue;
      const auto& m = results[i];
      pnr.push_back(m.pnr);
      auc.push_back(m.auc);
      p1.push_back(m.p1);
      r1.push_back(m.r1);
      f1.push_back(m.f1);
      p0.push_back(m.p0);
      r0.push_back(m.r0);
      f0.push_back(m.f0);
    }
    AblationRow row;
    row.family = key.first;
    row.layers = key.second;
    row.pnr = summarize(pnr);
    row.auc = summarize(auc);
    row.precision1 = summarize(p1);
    row.recall1 = summarize(r1);
    row.f1_1 = summarize(f1);
    row.precision0 = summarize(p0);
    row.recall0 = summarize(r0);
    row.f1_0 = summarize(f0);
    table.rows.push_back(std::move(row));
  }

  auto mean_auc = [&](const std::string& family) -> std::optional<double> {
    for (const auto& r : table.rows) {
      if (r.family == family && r.layers == base.model.layers) return r.auc.mean;
    }
    return std::nullopt;
  };
  auto virt_gat = mean_auc("Virt-GAT");
  auto gat = mean_auc("GAT");
  auto gin = mean_auc("GIN");
  if (virt_gat && gat && gin) {
    char buf[200];
    const bool holds = *virt_gat >= *gat && *gat >= *gin;
    std::snprintf(buf, sizeof buf, "AUC ordering Virt-GAT (%.4f) >= GAT (%.4f) >= GIN (%.4f): %s", *virt_gat, *gat,
                  *gin, holds ? "holds" : "does not hold");
    table.notes.emplace_back(buf);
  }
  return table;
}

}  // namespace layoutrank::train
