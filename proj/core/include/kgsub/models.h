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

#ifndef KGSUB_MODELS_H_
#define KGSUB_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kgsub/kg_data.h"

namespace kgsub {

enum class ModelKind { kSimplE, kSimplEPlus, kComplEx };

enum class Nonlinearity { kIdentity, kExponential, kLogistic, kReLU };

std::string_view to_string(ModelKind kind);
std::string_view to_string(Nonlinearity phi);
ModelKind parse_model_kind(std::string_view name);    // simple|simple-plus|complex
Nonlinearity parse_nonlinearity(std::string_view name);  // identity|exp|logistic|relu

double apply(Nonlinearity phi, double x);
// d phi / dx. The ReLU subgradient at 0 is 0.
double derivative(Nonlinearity phi, double x);

double sigmoid(double x);

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// How a relation's effective vectors derive from another relation.
struct RelationTie {
  RelationId parent = -1;  // -1: free relation, raw rows are used as is
  bool inverse = false;    // parent's fwd/bwd halves are swapped
  int delta_slot = -1;     // -1: exact equivalence (no delta subtracted)
};

// Relation tying derived from subsumption rules:
//   direct  r -> s:  r = (s.fwd - relu(d.fwd), s.bwd - relu(d.bwd))
//   inverse r -> s:  r = (s.bwd - relu(d.fwd), s.fwd - relu(d.bwd))
// Rule cycles are collapsed: the member with the lexicographically smallest
// name holds the parameters and the others are tied to it with no delta.
class ConstraintGraph {
 public:
  ConstraintGraph() = default;
  // Throws ArgumentError if a relation ends up with two different parents or
  // a cycle would force a relation to equal its own inverse.
  ConstraintGraph(std::span<const SubsumptionRule> rules,
                  std::span<const std::string> relation_names);

  bool empty() const { return rules_.empty(); }
  std::size_t num_relations() const { return ties_.size(); }
  std::size_t num_delta_slots() const { return num_delta_slots_; }
  const std::vector<SubsumptionRule>& rules() const { return rules_; }

  // Relations without ties when the graph was built for fewer relations.
  RelationTie tie(RelationId r) const;
  // Parents come before children.
  std::span<const RelationId> order() const { return order_; }

 private:
  std::vector<SubsumptionRule> rules_;
  std::vector<RelationTie> ties_;
  std::vector<RelationId> order_;
  std::size_t num_delta_slots_ = 0;
};

struct ModelConfig {
  ModelKind kind = ModelKind::kSimplEPlus;
  std::size_t dim = 50;
  Nonlinearity phi = Nonlinearity::kReLU;  // forced to identity unless SimplE+
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;
};

// Raw parameters. For ComplEx the head/tail entity matrices hold the real and
// imaginary parts of the entity vector, and fwd/bwd those of the relation.
struct EmbeddingModel {
  ModelKind kind = ModelKind::kSimplE;
  Nonlinearity phi = Nonlinearity::kIdentity;
  std::size_t dim = 0;

  Matrix entity_head;
  Matrix entity_tail;
  Matrix relation_fwd;
  Matrix relation_bwd;
  Matrix delta_fwd;  // one row per delta slot of `constraints`
  Matrix delta_bwd;
  ConstraintGraph constraints;

  std::size_t num_entities() const { return entity_head.rows(); }
  std::size_t num_relations() const { return relation_fwd.rows(); }
};

// Zero-initialised model of the given shape. Constraints require SimplE+.
EmbeddingModel make_model(const ModelConfig& config,
                          ConstraintGraph constraints = {});

// Raw parameters ~ N(0, 1/dim), deltas 0.
EmbeddingModel init_params(const ModelConfig& config, std::uint64_t seed,
                           ConstraintGraph constraints = {});

double multilinear_product(std::span<const double> x, std::span<const double> y,
                           std::span<const double> z);

enum class EntityRole { kHead, kTail };

// Entity vector as consumed by scoring (phi applied for SimplE+).
std::vector<double> embed_entity(const EmbeddingModel& model, EntityId id,
                                 EntityRole role);

struct RelationVectors {
  std::vector<double> fwd;
  std::vector<double> bwd;
};

RelationVectors effective_relation(const EmbeddingModel& model, RelationId id);

// Pre-sigmoid scores.
double score_simple(const EmbeddingModel& model, const Triple& t);
double score_complex(const EmbeddingModel& model, const Triple& t);
double score(const EmbeddingModel& model, const Triple& t);
double probability(const EmbeddingModel& model, const Triple& t);

// Score of explicit (already legal, i.e. post-phi) entity vectors under a
// relation of `model`. For ComplEx the two halves are the real and imaginary
// parts.
struct EntityVectors {
  std::span<const double> head_role;
  std::span<const double> tail_role;
};
double score_vectors(const EmbeddingModel& model, EntityVectors head,
                     RelationId relation, EntityVectors tail);

// Snapshot of post-phi entity matrices and effective relations, for fast
// repeated scoring. Must be rebuilt after the parameters change.
class ScoringView {
 public:
  explicit ScoringView(const EmbeddingModel& model);

  std::size_t num_entities() const { return head_.rows(); }
  std::size_t num_relations() const { return fwd_.rows(); }
  ModelKind kind() const { return kind_; }

  double score(const Triple& t) const;
  // out[e] = score(head, relation, e)
  void score_tails(EntityId head, RelationId relation,
                   std::span<double> out) const;
  // out[e] = score(e, relation, tail)
  void score_heads(RelationId relation, EntityId tail,
                   std::span<double> out) const;

  const Matrix& head_role() const { return head_; }
  const Matrix& tail_role() const { return tail_; }
  const Matrix& relation_fwd() const { return fwd_; }
  const Matrix& relation_bwd() const { return bwd_; }

 private:
  ModelKind kind_;
  Matrix head_;
  Matrix tail_;
  Matrix fwd_;
  Matrix bwd_;
};

// Effective relation matrices for every relation (rows = relations).
void materialize_relations(const EmbeddingModel& model, Matrix& fwd,
                           Matrix& bwd);

// Largest amount by which a premise exceeds its conclusion in any coordinate
// (0 when every rule is respected element-wise).
double max_order_violation(const EmbeddingModel& model);

}  // namespace kgsub

#endif  // KGSUB_MODELS_H_
