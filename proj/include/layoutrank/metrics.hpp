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

#ifndef LAYOUTRANK_METRICS_HPP
#define LAYOUTRANK_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace layoutrank::metrics {

// Concordant/discordant pair counts over all (positive, negative) pairs.
struct PairCounts {
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
  std::uint64_t tied = 0;
  std::uint64_t total() const { return concordant + discordant + tied; }
};

// Labels are 0/1; throws LengthMismatch when the spans differ in length.
PairCounts count_pairs(std::span<const double> scores, std::span<const int> labels);

struct PnrResult {
  enum class Kind { Finite, PosInf, AllTied };
  Kind kind = Kind::Finite;
  double value = 0.0;  // meaningful for Finite only
  PairCounts pairs;

  // Finite value, +inf, or NaN for AllTied.
  double as_double() const;
  std::string to_string() const;
};

// Concordant / discordant. Throws NoComparablePairs if labels are constant.
PnrResult pnr(std::span<const double> scores, std::span<const int> labels);

// Mann-Whitney AUC with ties counted one half. Throws SingleClass.
double auc(std::span<const double> scores, std::span<const int> labels);

struct LabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct Prf1 {
  LabelMetrics positive;  // label 1, predicted by score >= threshold
  LabelMetrics negative;  // label 0, predicted by score < threshold
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

Prf1 prf1(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);

// sum_{i=1..p} (2^rel_i - 1) / log2(i + 1). Throws ShortList if rels.size() < p.
double dcg(std::span<const int> rels, std::size_t p, const std::string& query = "");

struct Judgment {
  std::string query;
  std::vector<int> rels;  // graded 0..4, in ranked order
};

struct DcgReport {
  std::size_t p = 4;
  std::vector<double> per_query;
  double mean = 0.0;
  // Share of the top-p positions, over all queries, graded 0 or 1.
  double low_grade_ratio = 0.0;
};

// Throws ShortList naming the first short query; DataError on a grade outside 0..4.
DcgReport dcg_at(std::span<const Judgment> judgments, std::size_t p);

struct GsbCounts {
  std::uint64_t good = 0;
  std::uint64_t same = 0;
  std::uint64_t bad = 0;
};

// (good - bad) / (good + same + bad). Throws EmptyCounts.
double gsb(const GsbCounts& counts);

struct EvalReport {
  std::size_t num_items = 0;
  std::size_t num_positive = 0;
  PnrResult pnr;
  double auc = 0.0;
  Prf1 prf1;
  std::optional<DcgReport> dcg;

  std::string to_json() const;
};

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);

}  // namespace layoutrank::metrics

#endif  // LAYOUTRANK_METRICS_HPP
