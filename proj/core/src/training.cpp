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

#include "kgsub/training.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "kgsub/error.h"

namespace kgsub {

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kSGD ? "sgd" : "adagrad";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSGD;
  if (name == "adagrad") return OptimizerKind::kAdaGrad;
  throw ArgumentError("unknown optimizer '" + std::string(name) + "'");
}

void validate(const TrainConfig& config) {
  if (config.batch_size == 0) throw ArgumentError("batch_size must be >= 1");
  if (config.neg_ratio == 0) throw ArgumentError("neg_ratio must be >= 1");
  if (!(config.learning_rate > 0.0)) {
    throw ArgumentError("learning_rate must be > 0");
  }
  if (!(config.l2_lambda >= 0.0)) throw ArgumentError("l2_lambda must be >= 0");
}

std::vector<LabeledTriple> negative_batch(std::span<const Triple> positives,
                                          std::size_t neg_ratio,
                                          std::size_t num_entities, Rng& rng) {
  if (neg_ratio == 0) throw ArgumentError("neg_ratio must be >= 1");
  std::vector<LabeledTriple> batch;
  if (positives.empty()) return batch;
  if (num_entities == 0) throw ArgumentError("no entities to sample from");
  batch.reserve(positives.size() * (neg_ratio + 1));
  std::uniform_int_distribution<EntityId> pick(
      0, static_cast<EntityId>(num_entities - 1));
  std::bernoulli_distribution coin(0.5);
  for (const Triple& pos : positives) {
    batch.push_back({pos, 1});
    for (std::size_t n = 0; n < neg_ratio; ++n) {
      Triple neg = pos;
      EntityId& slot = coin(rng) ? neg.head : neg.tail;
      const EntityId original = slot;
      for (int attempt = 0; attempt <= kCorruptionRetries; ++attempt) {
        slot = pick(rng);
        if (slot != original) break;
      }
      batch.push_back({neg, -1});
    }
  }
  return batch;
}

Matrix& param_matrix(EmbeddingModel& model, Param p) {
  switch (p) {
    case Param::kEntityHead:
      return model.entity_head;
    case Param::kEntityTail:
      return model.entity_tail;
    case Param::kRelationFwd:
      return model.relation_fwd;
    case Param::kRelationBwd:
      return model.relation_bwd;
    case Param::kDeltaFwd:
      return model.delta_fwd;
    case Param::kDeltaBwd:
      return model.delta_bwd;
  }
  return model.entity_head;
}

const Matrix& param_matrix(const EmbeddingModel& model, Param p) {
  return param_matrix(const_cast<EmbeddingModel&>(model), p);
}

Gradients::Gradients(const EmbeddingModel& model) {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const Matrix& m = param_matrix(model, static_cast<Param>(i));
    grads_[i] = Matrix(m.rows(), m.cols());
    is_touched_[i].assign(m.rows(), 0);
  }
}

std::span<double> Gradients::row(Param p, std::size_t r) {
  const auto i = static_cast<std::size_t>(p);
  if (!is_touched_[i][r]) {
    is_touched_[i][r] = 1;
    touched_[i].push_back(r);
  }
  return grads_[i].row(r);
}

void Gradients::clear() {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    for (std::size_t r : touched_[i]) {
      auto g = grads_[i].row(r);
      std::fill(g.begin(), g.end(), 0.0);
      is_touched_[i][r] = 0;
    }
    touched_[i].clear();
  }
}

namespace {

// The delta reparameterisation uses the right derivative of relu at 0 so a
// delta that starts at exactly 0 can still leave the tie.
double delta_derivative(double x) { return x >= 0.0 ? 1.0 : 0.0; }

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void add_scaled(std::span<double> dst, std::span<const double> src,
                double scale) {
  for (std::size_t l = 0; l < dst.size(); ++l) dst[l] += scale * src[l];
}

// Raw rows touched by a batch, each listed once.
class RowSet {
 public:
  explicit RowSet(const EmbeddingModel& model) {
    for (std::size_t i = 0; i < kNumParams; ++i) {
      seen_[i].assign(param_matrix(model, static_cast<Param>(i)).rows(), 0);
    }
  }
  void add(Param p, std::size_t r) {
    const auto i = static_cast<std::size_t>(p);
    if (!seen_[i][r]) {
      seen_[i][r] = 1;
      rows_[i].push_back(r);
    }
  }
  std::span<const std::size_t> rows(Param p) const {
    return rows_[static_cast<std::size_t>(p)];
  }

 private:
  std::array<std::vector<char>, kNumParams> seen_;
  std::array<std::vector<std::size_t>, kNumParams> rows_;
};

// Walks the tie chain of `relation`, recording every raw row involved and,
// if grads is set, pushing the effective-row gradient (gf, gb) down to the
// raw parameters.
void relation_chain(const EmbeddingModel& model, RelationId relation,
                    std::vector<double> gf, std::vector<double> gb,
                    RowSet& touched, Gradients* grads) {
  RelationId r = relation;
  while (true) {
    const RelationTie tie = model.constraints.tie(r);
    if (tie.parent < 0) {
      const auto i = static_cast<std::size_t>(r);
      touched.add(Param::kRelationFwd, i);
      touched.add(Param::kRelationBwd, i);
      if (grads) {
        add_scaled(grads->row(Param::kRelationFwd, i), gf, 1.0);
        add_scaled(grads->row(Param::kRelationBwd, i), gb, 1.0);
      }
      return;
    }
    if (tie.delta_slot >= 0) {
      const auto slot = static_cast<std::size_t>(tie.delta_slot);
      touched.add(Param::kDeltaFwd, slot);
      touched.add(Param::kDeltaBwd, slot);
      if (grads) {
        const auto f = model.delta_fwd.row(slot);
        const auto b = model.delta_bwd.row(slot);
        auto df = grads->row(Param::kDeltaFwd, slot);
        auto db = grads->row(Param::kDeltaBwd, slot);
        for (std::size_t l = 0; l < model.dim; ++l) {
          df[l] -= gf[l] * delta_derivative(f[l]);
          db[l] -= gb[l] * delta_derivative(b[l]);
        }
      }
    }
    if (tie.inverse) std::swap(gf, gb);
    r = tie.parent;
  }
}

}  // namespace

double batch_loss(const EmbeddingModel& model,
                  std::span<const LabeledTriple> batch, double l2_lambda,
                  Gradients* grads) {
  if (batch.empty()) throw ArgumentError("empty batch");
  const std::size_t k = model.dim;
  const bool is_complex = model.kind == ModelKind::kComplEx;

  Matrix eff_fwd, eff_bwd;
  materialize_relations(model, eff_fwd, eff_bwd);

  // Post-phi entity vectors and phi' at the raw values.
  std::vector<double> hh(k), ht(k), th(k), tt(k);
  std::vector<double> dhh(k), dht(k), dth(k), dtt(k);
  std::vector<double> g_hh(k), g_ht(k), g_th(k), g_tt(k), g_f(k), g_b(k);

  auto load = [&](const Matrix& m, EntityId e, std::vector<double>& v,
                  std::vector<double>& dv) {
    const auto raw = m.row(static_cast<std::size_t>(e));
    for (std::size_t l = 0; l < k; ++l) {
      v[l] = apply(model.phi, raw[l]);
      dv[l] = derivative(model.phi, raw[l]);
    }
  };

  RowSet touched(model);
  double total = 0.0;
  for (const LabeledTriple& ex : batch) {
    const Triple& t = ex.triple;
    load(model.entity_head, t.head, hh, dhh);
    load(model.entity_tail, t.head, ht, dht);
    load(model.entity_head, t.tail, th, dth);
    load(model.entity_tail, t.tail, tt, dtt);
    const auto rf = eff_fwd.row(static_cast<std::size_t>(t.relation));
    const auto rb = eff_bwd.row(static_cast<std::size_t>(t.relation));

    double s = 0.0;
    if (is_complex) {
      for (std::size_t l = 0; l < k; ++l) {
        s += hh[l] * rf[l] * th[l] + ht[l] * rf[l] * tt[l] +
             hh[l] * rb[l] * tt[l] - ht[l] * rb[l] * th[l];
      }
    } else {
      double fwd = 0.0, bwd = 0.0;
      for (std::size_t l = 0; l < k; ++l) {
        fwd += hh[l] * rf[l] * tt[l];
        bwd += th[l] * rb[l] * ht[l];
      }
      s = 0.5 * (fwd + bwd);
    }

    const double mu = sigmoid(s);
    const double mu_c =
        std::clamp(mu, kProbabilityClamp, 1.0 - kProbabilityClamp);
    const bool clamped = mu_c != mu;
    double dloss_ds;
    if (ex.label > 0) {
      total -= std::log(mu_c);
      dloss_ds = clamped ? 0.0 : mu - 1.0;
    } else {
      total -= std::log(1.0 - mu_c);
      dloss_ds = clamped ? 0.0 : mu;
    }

    const auto h = static_cast<std::size_t>(t.head);
    const auto tl = static_cast<std::size_t>(t.tail);
    touched.add(Param::kEntityHead, h);
    touched.add(Param::kEntityTail, h);
    touched.add(Param::kEntityHead, tl);
    touched.add(Param::kEntityTail, tl);

    if (grads) {
      if (is_complex) {
        for (std::size_t l = 0; l < k; ++l) {
          g_hh[l] = dloss_ds * (rf[l] * th[l] + rb[l] * tt[l]);
          g_ht[l] = dloss_ds * (rf[l] * tt[l] - rb[l] * th[l]);
          g_th[l] = dloss_ds * (hh[l] * rf[l] - ht[l] * rb[l]);
          g_tt[l] = dloss_ds * (ht[l] * rf[l] + hh[l] * rb[l]);
          g_f[l] = dloss_ds * (hh[l] * th[l] + ht[l] * tt[l]);
          g_b[l] = dloss_ds * (hh[l] * tt[l] - ht[l] * th[l]);
        }
      } else {
        const double c = 0.5 * dloss_ds;
        for (std::size_t l = 0; l < k; ++l) {
          g_hh[l] = c * rf[l] * tt[l];
          g_tt[l] = c * hh[l] * rf[l];
          g_th[l] = c * rb[l] * ht[l];
          g_ht[l] = c * th[l] * rb[l];
          g_f[l] = c * hh[l] * tt[l];
          g_b[l] = c * th[l] * ht[l];
        }
      }
      // Partials are taken before any accumulation so h == t is handled.
      auto push = [&](Param p, std::size_t row, const std::vector<double>& g,
                      const std::vector<double>& dphi) {
        auto dst = grads->row(p, row);
        for (std::size_t l = 0; l < k; ++l) dst[l] += g[l] * dphi[l];
      };
      push(Param::kEntityHead, h, g_hh, dhh);
      push(Param::kEntityTail, h, g_ht, dht);
      push(Param::kEntityHead, tl, g_th, dth);
      push(Param::kEntityTail, tl, g_tt, dtt);
      relation_chain(model, t.relation, g_f, g_b, touched, grads);
    } else {
      relation_chain(model, t.relation, {}, {}, touched, nullptr);
    }
  }

  for (std::size_t i = 0; i < kNumParams; ++i) {
    const auto p = static_cast<Param>(i);
    const Matrix& m = param_matrix(model, p);
    for (std::size_t r : touched.rows(p)) {
      const auto raw = m.row(r);
      total += l2_lambda * squared_norm(raw);
      if (grads) add_scaled(grads->row(p, r), raw, 2.0 * l2_lambda);
    }
  }
  return total;
}

Optimizer::Optimizer(const EmbeddingModel& model, OptimizerKind kind,
                     double learning_rate)
    : kind_(kind), learning_rate_(learning_rate) {
  if (kind_ == OptimizerKind::kAdaGrad) {
    for (std::size_t i = 0; i < kNumParams; ++i) {
      const Matrix& m = param_matrix(model, static_cast<Param>(i));
      accum_[i] = Matrix(m.rows(), m.cols());
    }
  }
}

void Optimizer::step(EmbeddingModel& model, Gradients& grads) {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const auto p = static_cast<Param>(i);
    Matrix& params = param_matrix(model, p);
    const Matrix& g = grads.matrix(p);
    for (std::size_t r : grads.touched(p)) {
      auto w = params.row(r);
      const auto gr = g.row(r);
      if (kind_ == OptimizerKind::kSGD) {
        for (std::size_t l = 0; l < w.size(); ++l) {
          w[l] -= learning_rate_ * gr[l];
        }
        continue;
      }
      auto acc = accum_[i].row(r);
      for (std::size_t l = 0; l < w.size(); ++l) {
        acc[l] += gr[l] * gr[l];
        w[l] -= learning_rate_ * gr[l] /
                std::max(std::sqrt(acc[l]), kAdaGradFloor);
      }
    }
  }
  grads.clear();
}

void write_loss_csv(std::ostream& out, const LossTrace& trace, bool header) {
  if (header) out << "epoch,loss\n";
  for (const auto& e : trace.epochs) {
    out << fmt::format("{},{:.17g}\n", e.epoch, e.loss);
  }
}

LossTrace train(EmbeddingModel& model, std::span<const Triple> triples,
                const TrainConfig& config, const EpochCallback& on_epoch) {
  validate(config);
  LossTrace trace;
  if (config.epochs == 0 || triples.empty()) return trace;

  Rng shuffle_rng = make_stream(config.seed, stream::kShuffle);
  Rng sample_rng = make_stream(config.seed, stream::kSampling);
  Gradients grads(model);
  Optimizer optimizer(model, config.optimizer, config.learning_rate);
  std::vector<Triple> order(triples.begin(), triples.end());
  // l2_lambda weighs the regulariser once per epoch, spread over its batches.
  const std::size_t num_batches =
      (order.size() + config.batch_size - 1) / config.batch_size;
  const double batch_l2 = config.l2_lambda / static_cast<double>(num_batches);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    std::size_t examples = 0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size, ++batch_index) {
      const std::size_t len = std::min(config.batch_size, order.size() - start);
      const auto batch =
          negative_batch(std::span(order).subspan(start, len),
                         config.neg_ratio, model.num_entities(), sample_rng);
      const double loss = batch_loss(model, batch, batch_l2, &grads);
      if (!std::isfinite(loss)) {
        throw NumericError(fmt::format(
            "non-finite loss at epoch {} batch {}", epoch, batch_index));
      }
      optimizer.step(model, grads);
#ifndef NDEBUG
      if (max_order_violation(model) > 0.0) {
        throw NumericError(fmt::format(
            "subsumption order violated at epoch {} batch {}", epoch,
            batch_index));
      }
#endif
      epoch_loss += loss;
      examples += batch.size();
    }
    const EpochLoss record{epoch, epoch_loss / static_cast<double>(examples)};
    trace.epochs.push_back(record);
    if (on_epoch) on_epoch(record, model);
  }
  return trace;
}

LossTrace train(EmbeddingModel& model, const TripleStore& store,
                const TrainConfig& config, const EpochCallback& on_epoch) {
  if (model.num_entities() != store.num_entities() ||
      model.num_relations() != store.num_relations()) {
    throw ArgumentError("model shape does not match the triple store");
  }
  return train(model, store.train(), config, on_epoch);
}

}  // namespace kgsub
