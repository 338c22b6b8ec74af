/* Copyright 2026 The kgsub Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef KGSUB_EVALUATION_H_
#define KGSUB_EVALUATION_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kgsub/kg_data.h"
#include "kgsub/models.h"

namespace kgsub {

enum class Side { kHead, kTail };

enum class TieMode {
  kOptimistic,  // 1 + #strictly greater
  kExpected,    // mean of optimistic and pessimistic (1 + #>= others) ranks
};

std::string_view to_string(TieMode mode);
TieMode parse_tie_mode(std::string_view name);  // optimistic|expected

// Rank of the triple among its head or tail corruptions. Filtering drops
// candidates whose corrupted triple is in `known` (never the triple itself).
// Ranks are compared on pre-sigmoid scores.
double rank_triple(const ScoringView& view, const Triple& triple, Side side,
                   bool filtered, const KnownIndex& known,
                   TieMode tie_mode = TieMode::kOptimistic);

struct TripleRanks {
  Triple triple;
  double head_raw = 0;
  double tail_raw = 0;
  double head_filtered = 0;
  double tail_filtered = 0;
};

inline constexpr int kHitCutoffs[] = {1, 3, 10};

struct Metrics {
  double mrr = 0.0;
  std::map<int, double> hits;  // t -> share of the 2|T| ranks <= t
};

struct EvalReport {
  TieMode tie_mode = TieMode::kOptimistic;
  Metrics raw;
  Metrics filtered;
  std::vector<TripleRanks> ranks;

  double mrr_raw() const { return raw.mrr; }
  double mrr_filtered() const { return filtered.mrr; }
};

struct EvalOptions {
  TieMode tie_mode = TieMode::kOptimistic;
  std::size_t threads = 0;  // 0: hardware concurrency
};

// Mean reciprocal rank and hit@{1,3,10} over both corruption sides.
Metrics summarize(std::span<const double> ranks);

// Throws ArgumentError on an empty test list.
EvalReport evaluate(const EmbeddingModel& model, std::span<const Triple> test,
                    const KnownIndex& known, const EvalOptions& options = {});

void write_report_json(std::ostream& out, const EvalReport& report);
void write_report_table(std::ostream& out, const EvalReport& report);
// h,r,t,side,raw_rank,filtered_rank
void write_rank_csv(std::ostream& out, const EvalReport& report,
                    const Vocabulary& vocab);

}  // namespace kgsub

#endif  // KGSUB_EVALUATION_H_
