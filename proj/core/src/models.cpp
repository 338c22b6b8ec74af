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

#include "kgsub/models.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "kgsub/error.h"
#include "kgsub/rng.h"

namespace kgsub {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kSimplE:
      return "simple";
    case ModelKind::kSimplEPlus:
      return "simple-plus";
    case ModelKind::kComplEx:
      return "complex";
  }
  return "?";
}

std::string_view to_string(Nonlinearity phi) {
  switch (phi) {
    case Nonlinearity::kIdentity:
      return "identity";
    case Nonlinearity::kExponential:
      return "exp";
    case Nonlinearity::kLogistic:
      return "logistic";
    case Nonlinearity::kReLU:
      return "relu";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "simple") return ModelKind::kSimplE;
  if (name == "simple-plus") return ModelKind::kSimplEPlus;
  if (name == "complex") return ModelKind::kComplEx;
  throw ArgumentError("unknown model kind '" + std::string(name) + "'");
}

Nonlinearity parse_nonlinearity(std::string_view name) {
  if (name == "identity") return Nonlinearity::kIdentity;
  if (name == "exp") return Nonlinearity::kExponential;
  if (name == "logistic") return Nonlinearity::kLogistic;
  if (name == "relu") return Nonlinearity::kReLU;
  throw ArgumentError("unknown nonlinearity '" + std::string(name) + "'");
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double apply(Nonlinearity phi, double x) {
  switch (phi) {
    case Nonlinearity::kIdentity:
      return x;
    case Nonlinearity::kExponential:
      return std::exp(x);
    case Nonlinearity::kLogistic:
      return sigmoid(x);
    case Nonlinearity::kReLU:
      return x > 0.0 ? x : 0.0;
  }
  return x;
}

double derivative(Nonlinearity phi, double x) {
  switch (phi) {
    case Nonlinearity::kIdentity:
      return 1.0;
    case Nonlinearity::kExponential:
      return std::exp(x);
    case Nonlinearity::kLogistic: {
      const double s = sigmoid(x);
      return s * (1.0 - s);
    }
    case Nonlinearity::kReLU:
      return x > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

// ---------------------------------------------------------------------------
// ConstraintGraph

namespace {

struct Edge {
  RelationId to;
  bool inverse;
};

}  // namespace

ConstraintGraph::ConstraintGraph(std::span<const SubsumptionRule> rules,
                                 std::span<const std::string> relation_names)
    : rules_(rules.begin(), rules.end()),
      ties_(relation_names.size()) {
  const auto n = relation_names.size();
  std::vector<std::vector<Edge>> out(n);
  for (const auto& rule : rules_) {
    if (rule.premise < 0 || rule.conclusion < 0 ||
        static_cast<std::size_t>(rule.premise) >= n ||
        static_cast<std::size_t>(rule.conclusion) >= n) {
      throw ArgumentError("rule references an unknown relation id");
    }
    out[rule.premise].push_back(
        {rule.conclusion, rule.direction == RuleDirection::kInverse});
  }

  // Strongly connected components (Tarjan, iterative over small graphs is
  // unnecessary: rule sets are tiny, recursion depth is bounded by |R|).
  std::vector<int> index(n, -1), low(n, 0), component(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<RelationId> stack;
  int next_index = 0;
  int num_components = 0;
  std::function<void(RelationId)> visit = [&](RelationId v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const Edge& e : out[v]) {
      if (index[e.to] < 0) {
        visit(e.to);
        low[v] = std::min(low[v], low[e.to]);
      } else if (on_stack[e.to]) {
        low[v] = std::min(low[v], index[e.to]);
      }
    }
    if (low[v] == index[v]) {
      RelationId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component[w] = num_components;
      } while (w != v);
      ++num_components;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) visit(static_cast<RelationId>(v));
  }

  std::vector<std::vector<RelationId>> members(num_components);
  for (std::size_t v = 0; v < n; ++v) {
    members[component[v]].push_back(static_cast<RelationId>(v));
  }

  // Within a component every member is equivalent to the representative,
  // possibly up to inversion: member == rep^parity.
  std::vector<RelationId> rep(n);
  std::vector<int> parity(n, 0);
  for (const auto& group : members) {
    const RelationId r = *std::min_element(
        group.begin(), group.end(), [&](RelationId a, RelationId b) {
          return relation_names[a] < relation_names[b];
        });
    for (RelationId m : group) rep[m] = r;
    if (group.size() == 1) continue;
    std::vector<bool> seen(n, false);
    seen[r] = true;
    std::vector<RelationId> frontier{r};
    // Undirected walk within the component; an edge u->v (flag f) says
    // u == v^f.
    while (!frontier.empty()) {
      const RelationId v = frontier.back();
      frontier.pop_back();
      for (RelationId u : group) {
        for (const Edge& e : out[u]) {
          if (component[e.to] != component[u]) continue;
          if (e.to == v && !seen[u]) {
            parity[u] = parity[v] ^ static_cast<int>(e.inverse);
            seen[u] = true;
            frontier.push_back(u);
          } else if (u == v && !seen[e.to]) {
            parity[e.to] = parity[v] ^ static_cast<int>(e.inverse);
            seen[e.to] = true;
            frontier.push_back(e.to);
          }
        }
      }
    }
    for (RelationId u : group) {
      for (const Edge& e : out[u]) {
        if (component[e.to] != component[u]) continue;
        if (parity[u] != (parity[e.to] ^ static_cast<int>(e.inverse))) {
          throw ArgumentError("rule cycle through '" + relation_names[u] +
                              "' forces a relation to equal its inverse");
        }
      }
      if (u != r) ties_[u] = RelationTie{r, parity[u] != 0, -1};
    }
  }

  // Edges leaving a component constrain its representative.
  for (const auto& group : members) {
    const RelationId r = rep[group.front()];
    std::optional<Edge> target;
    for (RelationId u : group) {
      for (const Edge& e : out[u]) {
        if (component[e.to] == component[u]) continue;
        // rep == u^parity(u), u <= to^f, to == rep(to)^parity(to).
        const Edge canonical{
            rep[e.to], (parity[u] ^ static_cast<int>(e.inverse) ^
                        parity[e.to]) != 0};
        if (target && (target->to != canonical.to ||
                       target->inverse != canonical.inverse)) {
          throw ArgumentError("relation '" + relation_names[r] +
                              "' is subsumed by two different relations");
        }
        target = canonical;
      }
    }
    if (target) {
      ties_[r] = RelationTie{target->to, target->inverse,
                             static_cast<int>(num_delta_slots_++)};
    }
  }

  // Parents before children.
  std::vector<int> state(n, 0);
  std::function<void(RelationId)> place = [&](RelationId v) {
    if (state[v] == 2) return;
    state[v] = 2;
    if (ties_[v].parent >= 0) place(ties_[v].parent);
    order_.push_back(v);
  };
  for (std::size_t v = 0; v < n; ++v) place(static_cast<RelationId>(v));
}

RelationTie ConstraintGraph::tie(RelationId r) const {
  if (r < 0 || static_cast<std::size_t>(r) >= ties_.size()) return {};
  return ties_[r];
}

// ---------------------------------------------------------------------------
// Parameters

EmbeddingModel make_model(const ModelConfig& config,
                          ConstraintGraph constraints) {
  if (config.dim == 0) throw ArgumentError("embedding dim must be >= 1");
  if (!constraints.empty()) {
    if (config.kind != ModelKind::kSimplEPlus) {
      throw ArgumentError("subsumption constraints require simple-plus");
    }
    if (constraints.num_relations() != config.num_relations) {
      throw ArgumentError("constraint graph relation count mismatch");
    }
  }
  EmbeddingModel model;
  model.kind = config.kind;
  model.phi = config.kind == ModelKind::kSimplEPlus ? config.phi
                                                    : Nonlinearity::kIdentity;
  model.dim = config.dim;
  model.entity_head = Matrix(config.num_entities, config.dim);
  model.entity_tail = Matrix(config.num_entities, config.dim);
  model.relation_fwd = Matrix(config.num_relations, config.dim);
  model.relation_bwd = Matrix(config.num_relations, config.dim);
  model.delta_fwd = Matrix(constraints.num_delta_slots(), config.dim);
  model.delta_bwd = Matrix(constraints.num_delta_slots(), config.dim);
  model.constraints = std::move(constraints);
  return model;
}

EmbeddingModel init_params(const ModelConfig& config, std::uint64_t seed,
                           ConstraintGraph constraints) {
  EmbeddingModel model = make_model(config, std::move(constraints));
  Rng rng = make_stream(seed, stream::kInit);
  std::normal_distribution<double> normal(
      0.0, 1.0 / std::sqrt(static_cast<double>(config.dim)));
  for (Matrix* m : {&model.entity_head, &model.entity_tail,
                    &model.relation_fwd, &model.relation_bwd}) {
    for (double& v : m->values()) v = normal(rng);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Scoring

double multilinear_product(std::span<const double> x, std::span<const double> y,
                           std::span<const double> z) {
  if (x.size() != y.size() || y.size() != z.size()) {
    throw ArgumentError("multilinear product of vectors of unequal length");
  }
  double sum = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) sum += x[l] * y[l] * z[l];
  return sum;
}

namespace {

void check_entity(const EmbeddingModel& model, EntityId id) {
  if (id < 0 || static_cast<std::size_t>(id) >= model.num_entities()) {
    throw ArgumentError("entity id out of range: " + std::to_string(id));
  }
}

void check_relation(const EmbeddingModel& model, RelationId id) {
  if (id < 0 || static_cast<std::size_t>(id) >= model.num_relations()) {
    throw ArgumentError("relation id out of range: " + std::to_string(id));
  }
}

// Resolves a relation's effective rows given the parent's effective rows.
void resolve_tie(const EmbeddingModel& model, const RelationTie& tie,
                 std::span<const double> parent_fwd,
                 std::span<const double> parent_bwd, std::span<double> fwd,
                 std::span<double> bwd) {
  const auto& src_fwd = tie.inverse ? parent_bwd : parent_fwd;
  const auto& src_bwd = tie.inverse ? parent_fwd : parent_bwd;
  std::copy(src_fwd.begin(), src_fwd.end(), fwd.begin());
  std::copy(src_bwd.begin(), src_bwd.end(), bwd.begin());
  if (tie.delta_slot < 0) return;
  const auto df = model.delta_fwd.row(static_cast<std::size_t>(tie.delta_slot));
  const auto db = model.delta_bwd.row(static_cast<std::size_t>(tie.delta_slot));
  for (std::size_t l = 0; l < fwd.size(); ++l) {
    fwd[l] -= apply(Nonlinearity::kReLU, df[l]);
    bwd[l] -= apply(Nonlinearity::kReLU, db[l]);
  }
}

}  // namespace

std::vector<double> embed_entity(const EmbeddingModel& model, EntityId id,
                                 EntityRole role) {
  check_entity(model, id);
  const auto raw = (role == EntityRole::kHead ? model.entity_head
                                              : model.entity_tail)
                       .row(static_cast<std::size_t>(id));
  std::vector<double> out(raw.size());
  std::transform(raw.begin(), raw.end(), out.begin(),
                 [&](double x) { return apply(model.phi, x); });
  return out;
}

RelationVectors effective_relation(const EmbeddingModel& model,
                                   RelationId id) {
  check_relation(model, id);
  const RelationTie tie = model.constraints.tie(id);
  if (tie.parent < 0) {
    const auto f = model.relation_fwd.row(static_cast<std::size_t>(id));
    const auto b = model.relation_bwd.row(static_cast<std::size_t>(id));
    return {{f.begin(), f.end()}, {b.begin(), b.end()}};
  }
  const RelationVectors parent = effective_relation(model, tie.parent);
  RelationVectors out{std::vector<double>(model.dim),
                      std::vector<double>(model.dim)};
  resolve_tie(model, tie, parent.fwd, parent.bwd, out.fwd, out.bwd);
  return out;
}

void materialize_relations(const EmbeddingModel& model, Matrix& fwd,
                           Matrix& bwd) {
  fwd = model.relation_fwd;
  bwd = model.relation_bwd;
  for (RelationId r : model.constraints.order()) {
    const RelationTie tie = model.constraints.tie(r);
    if (tie.parent < 0) continue;
    const auto p = static_cast<std::size_t>(tie.parent);
    const auto i = static_cast<std::size_t>(r);
    resolve_tie(model, tie, fwd.row(p), bwd.row(p), fwd.row(i), bwd.row(i));
  }
}

namespace {

double simple_form(std::span<const double> h_head,
                   std::span<const double> h_tail,
                   std::span<const double> fwd, std::span<const double> bwd,
                   std::span<const double> t_head,
                   std::span<const double> t_tail) {
  return 0.5 * (multilinear_product(h_head, fwd, t_tail) +
                multilinear_product(t_head, bwd, h_tail));
}

// Re(<h, r, conj(t)>) with h = hr + i hi, r = rr + i ri, t = tr + i ti.
double complex_form(std::span<const double> hr, std::span<const double> hi,
                    std::span<const double> rr, std::span<const double> ri,
                    std::span<const double> tr, std::span<const double> ti) {
  return multilinear_product(hr, rr, tr) + multilinear_product(hi, rr, ti) +
         multilinear_product(hr, ri, ti) - multilinear_product(hi, ri, tr);
}

}  // namespace

double score_simple(const EmbeddingModel& model, const Triple& t) {
  if (model.kind == ModelKind::kComplEx) {
    throw ArgumentError("score_simple called on a ComplEx model");
  }
  const auto h_head = embed_entity(model, t.head, EntityRole::kHead);
  const auto h_tail = embed_entity(model, t.head, EntityRole::kTail);
  const auto t_head = embed_entity(model, t.tail, EntityRole::kHead);
  const auto t_tail = embed_entity(model, t.tail, EntityRole::kTail);
  const RelationVectors r = effective_relation(model, t.relation);
  return simple_form(h_head, h_tail, r.fwd, r.bwd, t_head, t_tail);
}

double score_complex(const EmbeddingModel& model, const Triple& t) {
  if (model.kind != ModelKind::kComplEx) {
    throw ArgumentError("score_complex called on a non-ComplEx model");
  }
  check_entity(model, t.head);
  check_entity(model, t.tail);
  check_relation(model, t.relation);
  const auto h = static_cast<std::size_t>(t.head);
  const auto tl = static_cast<std::size_t>(t.tail);
  const auto r = static_cast<std::size_t>(t.relation);
  return complex_form(model.entity_head.row(h), model.entity_tail.row(h),
                      model.relation_fwd.row(r), model.relation_bwd.row(r),
                      model.entity_head.row(tl), model.entity_tail.row(tl));
}

double score(const EmbeddingModel& model, const Triple& t) {
  return model.kind == ModelKind::kComplEx ? score_complex(model, t)
                                           : score_simple(model, t);
}

double probability(const EmbeddingModel& model, const Triple& t) {
  return sigmoid(score(model, t));
}

double score_vectors(const EmbeddingModel& model, EntityVectors head,
                     RelationId relation, EntityVectors tail) {
  const RelationVectors r = effective_relation(model, relation);
  if (model.kind == ModelKind::kComplEx) {
    return complex_form(head.head_role, head.tail_role, r.fwd, r.bwd,
                        tail.head_role, tail.tail_role);
  }
  return simple_form(head.head_role, head.tail_role, r.fwd, r.bwd,
                     tail.head_role, tail.tail_role);
}

double max_order_violation(const EmbeddingModel& model) {
  double worst = 0.0;
  for (const auto& rule : model.constraints.rules()) {
    const RelationVectors r = effective_relation(model, rule.premise);
    const RelationVectors s = effective_relation(model, rule.conclusion);
    const bool inv = rule.direction == RuleDirection::kInverse;
    const auto& s_fwd = inv ? s.bwd : s.fwd;
    const auto& s_bwd = inv ? s.fwd : s.bwd;
    for (std::size_t l = 0; l < model.dim; ++l) {
      worst = std::max(worst, r.fwd[l] - s_fwd[l]);
      worst = std::max(worst, r.bwd[l] - s_bwd[l]);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// ScoringView

ScoringView::ScoringView(const EmbeddingModel& model)
    : kind_(model.kind),
      head_(model.entity_head),
      tail_(model.entity_tail) {
  if (model.phi != Nonlinearity::kIdentity) {
    for (Matrix* m : {&head_, &tail_}) {
      for (double& v : m->values()) v = apply(model.phi, v);
    }
  }
  materialize_relations(model, fwd_, bwd_);
}

double ScoringView::score(const Triple& t) const {
  const auto h = static_cast<std::size_t>(t.head);
  const auto tl = static_cast<std::size_t>(t.tail);
  const auto r = static_cast<std::size_t>(t.relation);
  if (kind_ == ModelKind::kComplEx) {
    return complex_form(head_.row(h), tail_.row(h), fwd_.row(r), bwd_.row(r),
                        head_.row(tl), tail_.row(tl));
  }
  return simple_form(head_.row(h), tail_.row(h), fwd_.row(r), bwd_.row(r),
                     head_.row(tl), tail_.row(tl));
}

namespace {

// out[e] = scale * (<a, A[e]> + <b, B[e]>)
void score_rows(const Matrix& a_rows, std::span<const double> a,
                const Matrix& b_rows, std::span<const double> b, double scale,
                std::span<double> out) {
  const std::size_t k = a.size();
  for (std::size_t e = 0; e < out.size(); ++e) {
    const double* ra = a_rows.row(e).data();
    const double* rb = b_rows.row(e).data();
    double sum = 0.0;
    for (std::size_t l = 0; l < k; ++l) sum += a[l] * ra[l] + b[l] * rb[l];
    out[e] = scale * sum;
  }
}

}  // namespace

void ScoringView::score_tails(EntityId head, RelationId relation,
                              std::span<double> out) const {
  const auto h = static_cast<std::size_t>(head);
  const auto r = static_cast<std::size_t>(relation);
  const std::size_t k = fwd_.cols();
  std::vector<double> a(k), b(k);
  const auto hh = head_.row(h), ht = tail_.row(h);
  const auto rf = fwd_.row(r), rb = bwd_.row(r);
  if (kind_ == ModelKind::kComplEx) {
    // Re part of tail multiplies (hr*rr - hi*ri), Im part (hi*rr + hr*ri).
    for (std::size_t l = 0; l < k; ++l) {
      a[l] = hh[l] * rf[l] - ht[l] * rb[l];
      b[l] = ht[l] * rf[l] + hh[l] * rb[l];
    }
    score_rows(head_, a, tail_, b, 1.0, out);
    return;
  }
  // Forward term meets the candidate's tail role, backward its head role.
  for (std::size_t l = 0; l < k; ++l) {
    a[l] = hh[l] * rf[l];
    b[l] = rb[l] * ht[l];
  }
  score_rows(tail_, a, head_, b, 0.5, out);
}

void ScoringView::score_heads(RelationId relation, EntityId tail,
                              std::span<double> out) const {
  const auto t = static_cast<std::size_t>(tail);
  const auto r = static_cast<std::size_t>(relation);
  const std::size_t k = fwd_.cols();
  std::vector<double> a(k), b(k);
  const auto th = head_.row(t), tt = tail_.row(t);
  const auto rf = fwd_.row(r), rb = bwd_.row(r);
  if (kind_ == ModelKind::kComplEx) {
    // Re part of head multiplies (rr*tr + ri*ti), Im part (rr*ti - ri*tr).
    for (std::size_t l = 0; l < k; ++l) {
      a[l] = rf[l] * th[l] + rb[l] * tt[l];
      b[l] = rf[l] * tt[l] - rb[l] * th[l];
    }
    score_rows(head_, a, tail_, b, 1.0, out);
    return;
  }
  for (std::size_t l = 0; l < k; ++l) {
    a[l] = rf[l] * tt[l];
    b[l] = th[l] * rb[l];
  }
  score_rows(head_, a, tail_, b, 0.5, out);
}

}  // namespace kgsub
