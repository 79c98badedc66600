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

#include "layoutrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "layoutrank/errors.hpp"

namespace layoutrank::metrics {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw LengthMismatch(std::to_string(scores.size()) + " scores vs " + std::to_string(labels.size()) +
                         " labels");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("label " + std::to_string(labels[i]) + " is not 0/1");
    if (!std::isfinite(scores[i])) throw DataError("score " + std::to_string(i) + " is not finite");
  }
}

LabelMetrics label_metrics(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  LabelMetrics m;
  if (tp + fp == 0) {
    m.precision_undefined = true;
  } else {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  if (tp + fn == 0) {
    m.recall_undefined = true;
  } else {
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  if (m.precision + m.recall == 0.0) {
    m.f1_undefined = true;
  } else {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

}  // namespace

PairCounts count_pairs(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  std::vector<double> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) neg.push_back(scores[i]);
  }
  std::sort(neg.begin(), neg.end());
  PairCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    const auto lo = std::lower_bound(neg.begin(), neg.end(), scores[i]);
    const auto hi = std::upper_bound(lo, neg.end(), scores[i]);
    c.concordant += static_cast<std::uint64_t>(lo - neg.begin());
    c.tied += static_cast<std::uint64_t>(hi - lo);
    c.discordant += static_cast<std::uint64_t>(neg.end() - hi);
  }
  return c;
}

double PnrResult::as_double() const {
  switch (kind) {
    case Kind::Finite: return value;
    case Kind::PosInf: return std::numeric_limits<double>::infinity();
    case Kind::AllTied: break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string PnrResult::to_string() const {
  switch (kind) {
    case Kind::Finite: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", value);
      return buf;
    }
    case Kind::PosInf: return "inf";
    case Kind::AllTied: break;
  }
  return "all_tied";
}

PnrResult pnr(std::span<const double> scores, std::span<const int> labels) {
  PnrResult r;
  r.pairs = count_pairs(scores, labels);
  if (r.pairs.total() == 0) throw NoComparablePairs("labels are constant");
  if (r.pairs.discordant > 0) {
    r.value = static_cast<double>(r.pairs.concordant) / static_cast<double>(r.pairs.discordant);
  } else if (r.pairs.concordant > 0) {
    r.kind = PnrResult::Kind::PosInf;
  } else {
    r.kind = PnrResult::Kind::AllTied;
  }
  return r;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  const auto c = count_pairs(scores, labels);
  if (c.total() == 0) throw SingleClass("AUC needs both labels");
  return (static_cast<double>(c.concordant) + 0.5 * static_cast<double>(c.tied)) /
         static_cast<double>(c.total());
}

Prf1 prf1(std::span<const double> scores, std::span<const int> labels, double threshold) {
  check_inputs(scores, labels);
  Prf1 r;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      ++(predicted ? r.tp : r.fn);
    } else {
      ++(predicted ? r.fp : r.tn);
    }
  }
  r.positive = label_metrics(r.tp, r.fp, r.fn);
  r.negative = label_metrics(r.tn, r.fn, r.fp);
  return r;
}

double dcg(std::span<const int> rels, std::size_t p, const std::string& query) {
  if (rels.size() < p) {
    throw ShortList("query '" + query + "' has " + std::to_string(rels.size()) + " results, need " +
                    std::to_string(p));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    total += (std::exp2(static_cast<double>(rels[i])) - 1.0) / std::log2(static_cast<double>(i + 2));
  }
  return total;
}

DcgReport dcg_at(std::span<const Judgment> judgments, std::size_t p) {
  DcgReport r;
  r.p = p;
  std::size_t low = 0;
  std::size_t positions = 0;
  for (const auto& j : judgments) {
    for (int rel : j.rels) {
      if (rel < 0 || rel > 4) throw DataError("query '" + j.query + "': grade " + std::to_string(rel));
    }
    r.per_query.push_back(dcg(j.rels, p, j.query));
    for (std::size_t i = 0; i < p; ++i) low += j.rels[i] <= 1 ? 1 : 0;
    positions += p;
  }
  if (!r.per_query.empty()) {
    double sum = 0.0;
    for (double d : r.per_query) sum += d;
    r.mean = sum / static_cast<double>(r.per_query.size());
  }
  if (positions > 0) r.low_grade_ratio = static_cast<double>(low) / static_cast<double>(positions);
  return r;
}

double gsb(const GsbCounts& counts) {
  const auto total = counts.good + counts.same + counts.bad;
  if (total == 0) throw EmptyCounts("no Good/Same/Bad judgments");
  return (static_cast<double>(counts.good) - static_cast<double>(counts.bad)) / static_cast<double>(total);
}

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels, double threshold) {
  EvalReport r;
  r.num_items = scores.size();
  r.pnr = pnr(scores, labels);
  r.auc = auc(scores, labels);
  r.prf1 = prf1(scores, labels, threshold);
  r.num_positive = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  return r;
}

std::string EvalReport::to_json() const {
  using nlohmann::json;
  auto label_json = [](const LabelMetrics& m) {
    json j = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
    json undefined = json::array();
    if (m.precision_undefined) undefined.push_back("precision");
    if (m.recall_undefined) undefined.push_back("recall");
    if (m.f1_undefined) undefined.push_back("f1");
    if (!undefined.empty()) j["undefined"] = std::move(undefined);
    return j;
  };
  json j;
  j["num_items"] = num_items;
  j["num_positive"] = num_positive;
  if (pnr.kind == PnrResult::Kind::Finite) {
    j["pnr"] = pnr.value;
  } else {
    j["pnr"] = pnr.to_string();
  }
  j["pairs"] = {{"concordant", pnr.pairs.concordant},
                {"discordant", pnr.pairs.discordant},
                {"tied", pnr.pairs.tied}};
  j["auc"] = auc;
  j["label_1"] = label_json(prf1.positive);
  j["label_0"] = label_json(prf1.negative);
  j["confusion"] = {{"tp", prf1.tp}, {"fp", prf1.fp}, {"tn", prf1.tn}, {"fn", prf1.fn}};
  if (dcg) {
    j["dcg"] = {{"p", dcg->p},
                {"mean", dcg->mean},
                {"per_query", dcg->per_query},
                {"low_grade_ratio", dcg->low_grade_ratio}};
  }
  return j.dump(2);
}

}  // namespace layoutrank::metrics
