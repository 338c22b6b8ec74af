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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>
#include "json.hpp"

#include "kgsub/analysis.h"
#include "kgsub/error.h"
#include "kgsub/evaluation.h"
#include "unit/test_util.h"

namespace kgsub {
namespace {

// Model whose parameters are small integers, so ties are frequent.
EmbeddingModel tied_model(std::size_t ne, std::size_t nr, std::uint64_t seed) {
  EmbeddingModel m =
      make_model(ModelConfig{ModelKind::kSimplE, 3, Nonlinearity::kIdentity, ne, nr});
  Rng rng = make_stream(seed, "tied");
  std::uniform_int_distribution<int> d(-1, 1);
  for (Matrix* mat :
       {&m.entity_head, &m.entity_tail, &m.relation_fwd, &m.relation_bwd}) {
    for (double& v : mat->values()) v = d(rng);
  }
  return m;
}

// Sorts the candidates by descending score, placing the test triple first
// (optimistic) or last (pessimistic) among equal scores.
double sorted_rank(const EmbeddingModel& m, const Triple& triple, Side side,
                   bool filtered, const TripleSet& known, bool optimistic) {
  struct Candidate {
    double score;
    bool is_test;
  };
  std::vector<Candidate> cands;
  for (EntityId e = 0; e < static_cast<EntityId>(m.num_entities()); ++e) {
    Triple c = triple;
    (side == Side::kHead ? c.head : c.tail) = e;
    const bool is_test = c == triple;
    if (filtered && !is_test && known.contains(c)) continue;
    cands.push_back({score(m, c), is_test});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [&](const Candidate& a, const Candidate& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return optimistic ? a.is_test > b.is_test
                                       : a.is_test < b.is_test;
                   });
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].is_test) return static_cast<double>(i + 1);
  }
  return 0;
}

TEST(RankTriple, MatchesSortingOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t ne = 10 + seed * 4;
    const EmbeddingModel m = tied_model(ne, 3, seed);
    Rng rng = make_stream(seed, "rank");
    const auto train = testing::random_triples(ne * 2, ne, 3, rng);
    const auto test = testing::random_triples(15, ne, 3, rng);
    const std::vector<std::span<const Triple>> splits{train, test};
    const KnownIndex known(ne, 3, splits);
    TripleSet known_set(train.begin(), train.end());
    known_set.insert(test.begin(), test.end());
    const ScoringView view(m);
    for (const Triple& t : test) {
      for (Side side : {Side::kHead, Side::kTail}) {
        for (bool filtered : {false, true}) {
          const double opt = sorted_rank(m, t, side, filtered, known_set, true);
          const double pes = sorted_rank(m, t, side, filtered, known_set, false);
          ASSERT_EQ(rank_triple(view, t, side, filtered, known,
                                TieMode::kOptimistic),
                    opt);
          ASSERT_EQ(rank_triple(view, t, side, filtered, known,
                                TieMode::kExpected),
                    (opt + pes) / 2);
        }
      }
    }
  }
}

TEST(Summarize, WorkedExample) {
  const std::vector<double> ranks{1, 2, 4, 4};
  const Metrics m = summarize(ranks);
  EXPECT_DOUBLE_EQ(m.mrr, 0.5);
  EXPECT_DOUBLE_EQ(m.hits.at(1), 0.25);
  EXPECT_DOUBLE_EQ(m.hits.at(3), 0.5);
  EXPECT_DOUBLE_EQ(m.hits.at(10), 1.0);
}

TEST(Evaluate, FilteredNeverWorseThanRaw) {
  const EmbeddingModel m = testing::random_model(ModelKind::kComplEx, 4, 30, 3, 2);
  Rng rng = make_stream(3, "eval");
  const auto train = testing::random_triples(120, 30, 3, rng);
  const auto test = testing::random_triples(20, 30, 3, rng);
  const std::vector<std::span<const Triple>> splits{train, test};
  const KnownIndex known(30, 3, splits);
  for (TieMode mode : {TieMode::kOptimistic, TieMode::kExpected}) {
    const EvalReport r = evaluate(m, test, known, {mode, 1});
    ASSERT_EQ(r.ranks.size(), test.size());
    for (const TripleRanks& tr : r.ranks) {
      EXPECT_LE(tr.head_filtered, tr.head_raw);
      EXPECT_LE(tr.tail_filtered, tr.tail_raw);
    }
    EXPECT_GE(r.mrr_filtered(), r.mrr_raw());
  }
}

TEST(Evaluate, PerfectModelHasUnitFilteredMrr) {
  Rng rng = make_stream(4, "world");
  const WorldAssignment world = random_world(6, 3, 12, rng);
  if (world.true_facts.empty()) GTEST_SKIP();
  const EmbeddingModel m = construct_block_model(world);
  const std::vector<std::span<const Triple>> splits{world.true_facts};
  const KnownIndex known(world.num_entities, world.num_relations, splits);
  const EvalReport r = evaluate(m, world.true_facts, known);
  EXPECT_DOUBLE_EQ(r.mrr_filtered(), 1.0);
  EXPECT_DOUBLE_EQ(r.filtered.hits.at(1), 1.0);
}

TEST(Evaluate, InvariantUnderPositiveScaling) {
  const EmbeddingModel m = testing::random_model(ModelKind::kSimplE, 5, 25, 2, 5);
  EmbeddingModel scaled = m;
  for (double& v : scaled.entity_head.values()) v *= 3.0;
  for (double& v : scaled.entity_tail.values()) v *= 3.0;
  Rng rng = make_stream(6, "eval");
  const auto test = testing::random_triples(20, 25, 2, rng);
  const std::vector<std::span<const Triple>> splits{test};
  const KnownIndex known(25, 2, splits);
  const EvalReport a = evaluate(m, test, known);
  const EvalReport b = evaluate(scaled, test, known);
  for (std::size_t i = 0; i < test.size(); ++i) {
    EXPECT_EQ(a.ranks[i].head_raw, b.ranks[i].head_raw);
    EXPECT_EQ(a.ranks[i].tail_filtered, b.ranks[i].tail_filtered);
  }
}

TEST(Evaluate, EmptyTestIsAnError) {
  const EmbeddingModel m = testing::random_model(ModelKind::kSimplE, 2, 3, 1, 1);
  const KnownIndex known(3, 1, {});
  EXPECT_THROW(evaluate(m, {}, known), ArgumentError);
}

TEST(Evaluate, ReportFormats) {
  Vocabulary vocab;
  const auto test = testing::parse("a\tr\tb\nb\tr\tc\n", vocab);
  const EmbeddingModel m = testing::random_model(ModelKind::kSimplE, 2, 3, 1, 1);
  const std::vector<std::span<const Triple>> splits{test};
  const KnownIndex known(3, 1, splits);
  const EvalReport r = evaluate(m, test, known, {TieMode::kExpected, 1});

  std::ostringstream json;
  write_report_json(json, r);
  const auto j = nlohmann::json::parse(json.str());
  EXPECT_EQ(j["tie_mode"], "expected");
  EXPECT_EQ(j["num_test"], 2);
  EXPECT_DOUBLE_EQ(j["filtered"]["mrr"].get<double>(), r.mrr_filtered());
  EXPECT_TRUE(j["raw"].contains("hits@10"));

  std::ostringstream table;
  write_report_table(table, r);
  EXPECT_NE(table.str().find("MRR"), std::string::npos);
  EXPECT_NE(table.str().find("ties: expected"), std::string::npos);

  std::ostringstream csv;
  write_rank_csv(csv, r, vocab);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "h,r,t,side,raw_rank,filtered_rank");
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("a,r,b,head,", 0), 0u);
  std::size_t rows = 1;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 4u);
}

}  // namespace
}  // namespace kgsub
