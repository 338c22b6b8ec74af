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

#ifndef KGSUB_ANALYSIS_H_
#define KGSUB_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kgsub/kg_data.h"
#include "kgsub/models.h"
#include "kgsub/rng.h"

namespace kgsub {

// A complete truth assignment: `true_facts` hold, every other triple of
// E x R x E is false.
struct WorldAssignment {
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;
  std::vector<Triple> true_facts;

  bool holds(const Triple& t) const;
};

// Random world with 1..max_entities entities, 1..max_relations relations and
// 0..max_facts distinct true facts.
WorldAssignment random_world(std::size_t max_entities,
                             std::size_t max_relations, std::size_t max_facts,
                             Rng& rng);

enum class ProofVariant {
  kRepaired,  // margins guaranteed, validated by check_separation
  kLiteral,   // the constructions exactly as the printed proofs state them
};

// Width |E||R| + 1. Relation i's forward row is 1 on block i and -1 at the
// last index; entity j's head row is 1 at every n = j (mod |E|) and at the
// last index; entity k's tail row is 2 at i|E| + j for each true (e_j, r_i,
// e_k). The repaired variant also puts 1 at every tail row's last index so
// false triples score -1/2 instead of 0. Backward relation rows are zero.
EmbeddingModel construct_block_model(const WorldAssignment& world,
                                     ProofVariant variant = ProofVariant::kRepaired);

// Width |true_facts| + 1, built one fact at a time. Starts from width 1 with
// entities 1 and relations -1; each fact (h, r, t) appends a coordinate that
// is 0 everywhere except h.head = 1, r.fwd = 1 and t.tail = c. The repaired
// variant uses c = max(1, 1 - q), q being the fact's score sum before the
// step; the literal variant uses c = q + 1.
EmbeddingModel construct_incremental_model(
    const WorldAssignment& world,
    ProofVariant variant = ProofVariant::kRepaired);

struct SeparationReport {
  std::size_t triples = 0;
  std::size_t misclassified = 0;  // wrong side of 0.5, or inside the margin
  double min_margin = 0.0;        // min over triples of |p - 0.5|, signed by
                                  // correctness (negative when wrong)
  bool non_negative = true;       // all raw entity parameters >= 0
  bool passed(double margin) const {
    return misclassified == 0 && min_margin >= margin && non_negative;
  }
};

// Scores every triple of E x R x E against the world at threshold 0.5.
SeparationReport check_separation(const EmbeddingModel& model,
                                  const WorldAssignment& world,
                                  double margin = 0.1);

struct Counterexample {
  std::vector<double> flipped_head_role;  // -a
  std::vector<double> flipped_tail_role;
  double mu_conclusion = 0;          // mu(a, s, b)
  double mu_premise = 0;             // mu(a, r, b)
  double mu_conclusion_flipped = 0;  // mu(-a, s, b)
  double mu_premise_flipped = 0;     // mu(-a, r, b)

  bool violates_order() const { return mu_conclusion_flipped < mu_premise_flipped; }
};

// Given a direct rule r -> s and a strict witness mu(a,s,b) > mu(a,r,b),
// builds the entity a' = -a and evaluates both relations at (a', b). For
// SimplE and ComplEx the order is reversed there. Throws InapplicableError for
// SimplE+ (no legal entity has a negated embedding) and ArgumentError when
// the witness is not strict or the rule is not direct.
Counterexample subsumption_counterexample(const EmbeddingModel& model,
                                          const SubsumptionRule& rule,
                                          EntityId a, EntityId b);

}  // namespace kgsub

#endif  // KGSUB_ANALYSIS_H_
