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

#include "kgsub/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgsub/error.h"

namespace kgsub {

bool WorldAssignment::holds(const Triple& t) const {
  return std::find(true_facts.begin(), true_facts.end(), t) != true_facts.end();
}

WorldAssignment random_world(std::size_t max_entities,
                             std::size_t max_relations, std::size_t max_facts,
                             Rng& rng) {
  if (max_entities == 0 || max_relations == 0) {
    throw ArgumentError("a world needs at least one entity and one relation");
  }
  WorldAssignment world;
  world.num_entities =
      std::uniform_int_distribution<std::size_t>(1, max_entities)(rng);
  world.num_relations =
      std::uniform_int_distribution<std::size_t>(1, max_relations)(rng);
  const std::size_t universe =
      world.num_entities * world.num_relations * world.num_entities;
  const std::size_t facts = std::uniform_int_distribution<std::size_t>(
      0, std::min(max_facts, universe))(rng);
  std::vector<std::size_t> cells(universe);
  for (std::size_t i = 0; i < universe; ++i) cells[i] = i;
  std::shuffle(cells.begin(), cells.end(), rng);
  for (std::size_t i = 0; i < facts; ++i) {
    const std::size_t c = cells[i];
    const std::size_t ne = world.num_entities;
    const std::size_t nr = world.num_relations;
    world.true_facts.push_back({static_cast<EntityId>(c / (nr * ne)),
                                static_cast<RelationId>((c / ne) % nr),
                                static_cast<EntityId>(c % ne)});
  }
  return world;
}

namespace {

void check_world(const WorldAssignment& world) {
  if (world.num_entities == 0 || world.num_relations == 0) {
    throw ArgumentError("degenerate world");
  }
  for (const Triple& t : world.true_facts) {
    if (t.head < 0 || t.tail < 0 || t.relation < 0 ||
        static_cast<std::size_t>(t.head) >= world.num_entities ||
        static_cast<std::size_t>(t.tail) >= world.num_entities ||
        static_cast<std::size_t>(t.relation) >= world.num_relations) {
      throw ArgumentError("fact outside the world");
    }
  }
}

ModelConfig plus_config(const WorldAssignment& world, std::size_t dim) {
  return ModelConfig{ModelKind::kSimplEPlus, dim, Nonlinearity::kReLU,
                     world.num_entities, world.num_relations};
}

}  // namespace

EmbeddingModel construct_block_model(const WorldAssignment& world,
                                     ProofVariant variant) {
  check_world(world);
  const std::size_t ne = world.num_entities;
  const std::size_t nr = world.num_relations;
  const std::size_t last = ne * nr;
  EmbeddingModel model = make_model(plus_config(world, last + 1));
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t n = i * ne; n < (i + 1) * ne; ++n) {
      model.relation_fwd(i, n) = 1.0;
    }
    model.relation_fwd(i, last) = -1.0;
  }
  for (std::size_t j = 0; j < ne; ++j) {
    for (std::size_t n = 0; n < last; ++n) {
      if (n % ne == j) model.entity_head(j, n) = 1.0;
    }
    model.entity_head(j, last) = 1.0;
    if (variant == ProofVariant::kRepaired) model.entity_tail(j, last) = 1.0;
  }
  for (const Triple& f : world.true_facts) {
    const auto i = static_cast<std::size_t>(f.relation);
    const auto j = static_cast<std::size_t>(f.head);
    model.entity_tail(static_cast<std::size_t>(f.tail), i * ne + j) = 2.0;
  }
  return model;
}

EmbeddingModel construct_incremental_model(const WorldAssignment& world,
                                           ProofVariant variant) {
  check_world(world);
  std::vector<Triple> facts;
  for (const Triple& t : world.true_facts) {
    if (std::find(facts.begin(), facts.end(), t) == facts.end()) {
      facts.push_back(t);
    }
  }
  const std::size_t width = facts.size() + 1;
  EmbeddingModel model = make_model(plus_config(world, width));
  // Base case in coordinate 0; the remaining coordinates start at 0, which
  // is what appending a zero coordinate amounts to.
  for (std::size_t e = 0; e < world.num_entities; ++e) {
    model.entity_head(e, 0) = 1.0;
    model.entity_tail(e, 0) = 1.0;
  }
  for (std::size_t r = 0; r < world.num_relations; ++r) {
    model.relation_fwd(r, 0) = -1.0;
    model.relation_bwd(r, 0) = -1.0;
  }
  for (std::size_t n = 0; n < facts.size(); ++n) {
    const Triple& f = facts[n];
    // Score sum (without the 1/2) of the fact under coordinates 0..n.
    const double q = 2.0 * score_simple(model, f);
    const double c =
        variant == ProofVariant::kRepaired ? std::max(1.0, 1.0 - q) : q + 1.0;
    const std::size_t coord = n + 1;
    model.entity_head(static_cast<std::size_t>(f.head), coord) = 1.0;
    model.relation_fwd(static_cast<std::size_t>(f.relation), coord) = 1.0;
    model.entity_tail(static_cast<std::size_t>(f.tail), coord) = c;
  }
  return model;
}

SeparationReport check_separation(const EmbeddingModel& model,
                                  const WorldAssignment& world,
                                  double margin) {
  SeparationReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const Matrix* m : {&model.entity_head, &model.entity_tail}) {
    for (double v : m->values()) {
      if (v < 0.0) report.non_negative = false;
    }
  }
  const ScoringView view(model);
  for (std::size_t h = 0; h < world.num_entities; ++h) {
    for (std::size_t r = 0; r < world.num_relations; ++r) {
      for (std::size_t t = 0; t < world.num_entities; ++t) {
        const Triple triple{static_cast<EntityId>(h),
                            static_cast<RelationId>(r),
                            static_cast<EntityId>(t)};
        const double p = sigmoid(view.score(triple));
        const double signed_margin = world.holds(triple) ? p - 0.5 : 0.5 - p;
        report.min_margin = std::min(report.min_margin, signed_margin);
        if (signed_margin < margin) ++report.misclassified;
        ++report.triples;
      }
    }
  }
  return report;
}

Counterexample subsumption_counterexample(const EmbeddingModel& model,
                                          const SubsumptionRule& rule,
                                          EntityId a, EntityId b) {
  if (model.kind == ModelKind::kSimplEPlus) {
    throw InapplicableError(
        "entity embeddings are non-negative; -a is not a legal embedding");
  }
  if (rule.direction != RuleDirection::kDirect) {
    throw ArgumentError("counterexample construction needs a direct rule");
  }
  const double mu_s = probability(model, {a, rule.conclusion, b});
  const double mu_r = probability(model, {a, rule.premise, b});
  if (!(mu_s > mu_r)) {
    throw ArgumentError("trivial subsumption, no counterexample exists");
  }
  Counterexample cx;
  cx.mu_conclusion = mu_s;
  cx.mu_premise = mu_r;
  cx.flipped_head_role = embed_entity(model, a, EntityRole::kHead);
  cx.flipped_tail_role = embed_entity(model, a, EntityRole::kTail);
  for (double& v : cx.flipped_head_role) v = -v;
  for (double& v : cx.flipped_tail_role) v = -v;
  const auto b_head = embed_entity(model, b, EntityRole::kHead);
  const auto b_tail = embed_entity(model, b, EntityRole::kTail);
  const EntityVectors flipped{cx.flipped_head_role, cx.flipped_tail_role};
  const EntityVectors tail{b_head, b_tail};
  cx.mu_conclusion_flipped =
      sigmoid(score_vectors(model, flipped, rule.conclusion, tail));
  cx.mu_premise_flipped =
      sigmoid(score_vectors(model, flipped, rule.premise, tail));
  return cx;
}

}  // namespace kgsub
