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

#include "kgsub/evaluation.h"

#include <algorithm>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "kgsub/error.h"

namespace kgsub {

std::string_view to_string(TieMode mode) {
  return mode == TieMode::kOptimistic ? "optimistic" : "expected";
}

TieMode parse_tie_mode(std::string_view name) {
  if (name == "optimistic") return TieMode::kOptimistic;
  if (name == "expected") return TieMode::kExpected;
  throw ArgumentError("unknown tie mode '" + std::string(name) + "'");
}

namespace {

struct SideRanks {
  double raw;
  double filtered;
};

// Ranks from a full candidate score vector. Both raw and filtered come out of
// one pass.
SideRanks ranks_from_scores(std::span<const double> scores, EntityId original,
                            std::span<const EntityId> known_candidates,
                            TieMode tie_mode) {
  const double target = scores[static_cast<std::size_t>(original)];
  std::size_t greater = 0;
  std::size_t equal = 0;
  for (std::size_t e = 0; e < scores.size(); ++e) {
    if (static_cast<EntityId>(e) == original) continue;
    if (scores[e] > target) {
      ++greater;
    } else if (scores[e] == target) {
      ++equal;
    }
  }
  std::size_t known_greater = 0;
  std::size_t known_equal = 0;
  for (EntityId e : known_candidates) {
    if (e == original) continue;
    const double s = scores[static_cast<std::size_t>(e)];
    if (s > target) {
      ++known_greater;
    } else if (s == target) {
      ++known_equal;
    }
  }
  auto rank = [&](std::size_t g, std::size_t eq) {
    const double optimistic = 1.0 + static_cast<double>(g);
    if (tie_mode == TieMode::kOptimistic) return optimistic;
    return optimistic + 0.5 * static_cast<double>(eq);
  };
  return {rank(greater, equal),
          rank(greater - known_greater, equal - known_equal)};
}

SideRanks rank_both(const ScoringView& view, const Triple& t, Side side,
                    const KnownIndex& known, TieMode tie_mode,
                    std::vector<double>& scratch) {
  scratch.resize(view.num_entities());
  if (side == Side::kTail) {
    view.score_tails(t.head, t.relation, scratch);
    return ranks_from_scores(scratch, t.tail, known.tails(t.head, t.relation),
                             tie_mode);
  }
  view.score_heads(t.relation, t.tail, scratch);
  return ranks_from_scores(scratch, t.head, known.heads(t.relation, t.tail),
                           tie_mode);
}

}  // namespace

double rank_triple(const ScoringView& view, const Triple& triple, Side side,
                   bool filtered, const KnownIndex& known, TieMode tie_mode) {
  std::vector<double> scratch;
  const SideRanks r = rank_both(view, triple, side, known, tie_mode, scratch);
  return filtered ? r.filtered : r.raw;
}

Metrics summarize(std::span<const double> ranks) {
  Metrics m;
  if (ranks.empty()) return m;
  double rr = 0.0;
  for (int t : kHitCutoffs) m.hits[t] = 0.0;
  for (double r : ranks) {
    rr += 1.0 / r;
    for (int t : kHitCutoffs) {
      if (r <= t) m.hits[t] += 1.0;
    }
  }
  const auto n = static_cast<double>(ranks.size());
  m.mrr = rr / n;
  for (auto& [t, h] : m.hits) h /= n;
  return m;
}

EvalReport evaluate(const EmbeddingModel& model, std::span<const Triple> test,
                    const KnownIndex& known, const EvalOptions& options) {
  if (test.empty()) throw ArgumentError("empty test set");
  const ScoringView view(model);
  EvalReport report;
  report.tie_mode = options.tie_mode;
  report.ranks.resize(test.size());

  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, test.size());

  // Each worker owns a strided slice of the test list and writes into its
  // own slots, so the result does not depend on the worker count.
  auto work = [&](std::size_t worker) {
    std::vector<double> scratch;
    for (std::size_t i = worker; i < test.size(); i += threads) {
      const Triple& t = test[i];
      const SideRanks h =
          rank_both(view, t, Side::kHead, known, options.tie_mode, scratch);
      const SideRanks tl =
          rank_both(view, t, Side::kTail, known, options.tie_mode, scratch);
      report.ranks[i] = TripleRanks{t, h.raw, tl.raw, h.filtered, tl.filtered};
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  std::vector<double> raw, filtered;
  raw.reserve(2 * test.size());
  filtered.reserve(2 * test.size());
  for (const auto& r : report.ranks) {
    raw.push_back(r.head_raw);
    raw.push_back(r.tail_raw);
    filtered.push_back(r.head_filtered);
    filtered.push_back(r.tail_filtered);
  }
  report.raw = summarize(raw);
  report.filtered = summarize(filtered);
  return report;
}

void write_report_json(std::ostream& out, const EvalReport& report) {
  auto metrics = [](const Metrics& m) {
    nlohmann::ordered_json j;
    j["mrr"] = m.mrr;
    for (const auto& [t, h] : m.hits) j["hits@" + std::to_string(t)] = h;
    return j;
  };
  nlohmann::ordered_json j;
  j["tie_mode"] = std::string(to_string(report.tie_mode));
  j["num_test"] = report.ranks.size();
  j["raw"] = metrics(report.raw);
  j["filtered"] = metrics(report.filtered);
  out << j.dump(2) << '\n';
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  out << fmt::format("{:<10} {:>8} {:>8} {:>8} {:>8}\n", "", "MRR", "Hit@1",
                     "Hit@3", "Hit@10");
  auto line = [&](std::string_view name, const Metrics& m) {
    out << fmt::format("{:<10} {:>8.4f} {:>8.4f} {:>8.4f} {:>8.4f}\n", name,
                       m.mrr, m.hits.at(1), m.hits.at(3), m.hits.at(10));
  };
  line("Filter", report.filtered);
  line("Raw", report.raw);
  out << fmt::format("({} test triples, ties: {})\n", report.ranks.size(),
                     to_string(report.tie_mode));
}

void write_rank_csv(std::ostream& out, const EvalReport& report,
                    const Vocabulary& vocab) {
  out << "h,r,t,side,raw_rank,filtered_rank\n";
  for (const auto& r : report.ranks) {
    const auto& h = vocab.entity_name(r.triple.head);
    const auto& rel = vocab.relation_name(r.triple.relation);
    const auto& t = vocab.entity_name(r.triple.tail);
    out << fmt::format("{},{},{},head,{},{}\n", h, rel, t, r.head_raw,
                       r.head_filtered);
    out << fmt::format("{},{},{},tail,{},{}\n", h, rel, t, r.tail_raw,
                       r.tail_filtered);
  }
}

}  // namespace kgsub
