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

// Acceptance suite: prints one PASS/FAIL line per criterion. The exit code
// is 0 when every criterion ran, whatever its outcome; --strict makes any
// FAIL exit with 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <fmt/format.h>

#include "cli/commands.h"
#include "cli/run_config.h"
#include "kgsub/analysis.h"
#include "kgsub/error.h"
#include "kgsub/evaluation.h"
#include "kgsub/kg_data.h"
#include "kgsub/logic.h"
#include "kgsub/models.h"
#include "kgsub/training.h"

namespace kgsub {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeeds[] = {0, 1, 2};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += fmt::format("{}{:.3f}", s.empty() ? "" : "/", x);
  return s;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Dataset load_fixture(const fs::path& dir) {
  DatasetPaths paths{dir / "train.tsv", std::nullopt, dir / "test.tsv",
                     std::nullopt};
  if (fs::exists(dir / "valid.tsv")) paths.valid = dir / "valid.tsv";
  if (fs::exists(dir / "rules.tsv")) paths.rules = dir / "rules.tsv";
  return load_dataset(paths);
}

// Defaults for the small sets (Sport, Location).
TrainConfig small_config(std::uint64_t seed) {
  TrainConfig c;
  c.epochs = 100;
  c.batch_size = 32;
  c.seed = seed;
  return c;
}
constexpr std::size_t kSmallDim = 50;

TrainConfig large_config(std::uint64_t seed) {
  TrainConfig c;
  c.epochs = 100;
  c.batch_size = 100;
  c.seed = seed;
  return c;
}
constexpr std::size_t kLargeDim = 200;

struct Run {
  EmbeddingModel model;
  LossTrace trace;
  EvalReport report;
  double seconds = 0;
};

Run fit_and_evaluate(const Dataset& data, std::span<const Triple> train,
                     ModelKind kind, Nonlinearity phi, std::size_t dim,
                     const TrainConfig& config, bool constrained) {
  const auto start = Clock::now();
  Run run;
  run.model = cli::fit_model(data, train, kind, phi, dim, config, constrained,
                             &run.trace);
  run.report = evaluate(run.model, data.store.test(), data.store.known());
  run.seconds = seconds_since(start);
  std::cerr << fmt::format("  {} {} seed {}: filtered MRR {:.4f} hit@1 {:.4f} ({:.1f}s)\n",
                           to_string(kind), to_string(phi), config.seed,
                           run.report.mrr_filtered(),
                           run.report.filtered.hits.at(1), run.seconds);
  return run;
}

// SimplE and constrained SimplE+ on a stripped small set, one run per seed.
struct Table5 {
  std::vector<Run> simple;
  std::vector<Run> plus;

  std::vector<double> metric(const std::vector<Run>& runs, int hit) const {
    std::vector<double> v;
    for (const Run& r : runs) {
      v.push_back(hit == 0 ? r.report.mrr_filtered()
                           : r.report.filtered.hits.at(hit));
    }
    return v;
  }
  double max_seconds() const {
    double m = 0;
    for (const auto* runs : {&simple, &plus}) {
      for (const Run& r : *runs) m = std::max(m, r.seconds);
    }
    return m;
  }
};

Table5 run_table5(const Dataset& data) {
  const StripResult stripped = strip_redundant(data.store.train(), data.rules);
  Table5 t;
  for (std::uint64_t seed : kSeeds) {
    t.simple.push_back(fit_and_evaluate(data, stripped.kept, ModelKind::kSimplE,
                                        Nonlinearity::kIdentity, kSmallDim,
                                        small_config(seed), false));
    t.plus.push_back(fit_and_evaluate(data, stripped.kept,
                                      ModelKind::kSimplEPlus,
                                      Nonlinearity::kReLU, kSmallDim,
                                      small_config(seed), true));
  }
  return t;
}

Outcome criterion_sport(const Table5& t) {
  const double plus_mrr = median(t.metric(t.plus, 0));
  const double plus_h1 = median(t.metric(t.plus, 1));
  const double simple_mrr = median(t.metric(t.simple, 0));
  bool beats = true;
  for (int hit : {0, 1, 3, 10}) {
    beats &= median(t.metric(t.plus, hit)) > median(t.metric(t.simple, hit));
  }
  const double secs = t.max_seconds();
  return {plus_mrr >= 0.35 && plus_h1 >= 0.30 && simple_mrr <= 0.30 && beats &&
              secs < 300,
          fmt::format("SimplE+ MRR {:.3f} (>=0.35) hit@1 {:.3f} (>=0.30); "
                      "SimplE MRR {:.3f} (<=0.30); SimplE+ ahead on every "
                      "metric: {}; slowest run {:.1f}s (<300s)",
                      plus_mrr, plus_h1, simple_mrr, beats ? "yes" : "no",
                      secs)};
}

Outcome criterion_location(const Table5& t) {
  const double plus_h1 = median(t.metric(t.plus, 1));
  const double simple_h1 = median(t.metric(t.simple, 1));
  const double gain = simple_h1 > 0 ? (plus_h1 - simple_h1) / simple_h1
                                    : (plus_h1 > 0 ? INFINITY : 0.0);
  const double secs = t.max_seconds();
  return {plus_h1 >= 0.35 && simple_h1 <= 0.25 && gain >= 0.5 && secs < 120,
          fmt::format("SimplE+ hit@1 {:.3f} (>=0.35); SimplE hit@1 {:.3f} "
                      "(<=0.25); relative gain {:.0f}% (>=50%); slowest run "
                      "{:.1f}s (<120s)",
                      plus_h1, simple_h1, 100 * gain, secs)};
}

Outcome criterion_logical(const Dataset& sport, const Dataset& location) {
  bool pass = true;
  std::string detail;
  for (const auto& [name, data, target] :
       {std::tuple<const char*, const Dataset*, double>{"Sport", &sport, 0.288},
        {"Location", &location, 0.270}}) {
    auto rate = [&](bool strip) {
      std::vector<Triple> train(data->store.train().begin(),
                                data->store.train().end());
      if (strip) train = strip_redundant(train, data->rules).kept;
      return logical_hit1(data->store.test(),
                          forward_closure(train, data->rules));
    };
    const double a = rate(true), b = rate(true), full = rate(false);
    pass &= std::abs(a - target) <= 0.03 && a == b;
    detail += fmt::format("{}{} {:.3f} (target {:.3f}+-0.03, full train {:.3f})",
                          detail.empty() ? "" : "; ", name, a, target, full);
  }
  return {pass, detail + "; repeat runs identical"};
}

struct Wn18Runs {
  std::map<Nonlinearity, std::vector<Run>> plus;
  std::vector<Run> simple;
  double comparison_seconds = 0;  // SimplE and SimplE+ ReLU, all seeds
};

Wn18Runs run_wn18(const Dataset& data) {
  Wn18Runs w;
  const auto start = Clock::now();
  for (std::uint64_t seed : kSeeds) {
    w.simple.push_back(fit_and_evaluate(data, data.store.train(),
                                        ModelKind::kSimplE,
                                        Nonlinearity::kIdentity, kLargeDim,
                                        large_config(seed), false));
    w.plus[Nonlinearity::kReLU].push_back(fit_and_evaluate(
        data, data.store.train(), ModelKind::kSimplEPlus, Nonlinearity::kReLU,
        kLargeDim, large_config(seed), false));
  }
  w.comparison_seconds = seconds_since(start);
  for (Nonlinearity phi : {Nonlinearity::kLogistic, Nonlinearity::kExponential}) {
    for (std::uint64_t seed : kSeeds) {
      w.plus[phi].push_back(fit_and_evaluate(data, data.store.train(),
                                             ModelKind::kSimplEPlus, phi,
                                             kLargeDim, large_config(seed),
                                             false));
    }
  }
  return w;
}

std::vector<double> mrrs(const std::vector<Run>& runs) {
  std::vector<double> v;
  for (const Run& r : runs) v.push_back(r.report.mrr_filtered());
  return v;
}

Outcome criterion_nonnegativity(const Wn18Runs& w) {
  const double plus = median(mrrs(w.plus.at(Nonlinearity::kReLU)));
  const double simple = median(mrrs(w.simple));
  return {std::abs(plus - simple) <= 0.03 && w.comparison_seconds < 600,
          fmt::format("WN18 desk scale: SimplE+ MRR {:.3f} [{}] vs SimplE "
                      "{:.3f} [{}], gap {:.3f} (<=0.03); {:.0f}s (<600s)",
                      plus, join(mrrs(w.plus.at(Nonlinearity::kReLU))), simple,
                      join(mrrs(w.simple)), std::abs(plus - simple),
                      w.comparison_seconds)};
}

Outcome criterion_nonlinearity(const Wn18Runs& w) {
  const double relu = median(mrrs(w.plus.at(Nonlinearity::kReLU)));
  const double logistic = median(mrrs(w.plus.at(Nonlinearity::kLogistic)));
  const double exp = median(mrrs(w.plus.at(Nonlinearity::kExponential)));
  return {relu >= logistic && relu >= exp,
          fmt::format("median MRR relu {:.3f} >= logistic {:.3f} and "
                      "exponential {:.3f}",
                      relu, logistic, exp)};
}

std::size_t settle_epoch(const LossTrace& trace) {
  const double final_loss = trace.epochs.back().loss;
  for (const EpochLoss& e : trace.epochs) {
    if (e.loss < 1.2 * final_loss) return e.epoch;
  }
  return trace.epochs.back().epoch;
}

Outcome criterion_convergence(const Table5& sport) {
  const std::size_t plus = settle_epoch(sport.plus.front().trace);
  const std::size_t simple = settle_epoch(sport.simple.front().trace);
  return {plus <= simple,
          fmt::format("first epoch below 1.2x final loss: SimplE+ {} <= "
                      "SimplE {}",
                      plus, simple)};
}

Outcome criterion_sweep(const fs::path& sport_dir, const fs::path& scratch) {
  std::map<std::pair<double, cli::SweepMethod>, std::vector<double>> cells;
  std::ostringstream log;
  for (std::uint64_t seed : kSeeds) {
    cli::RunConfig config;
    config.train = sport_dir / "train.tsv";
    config.test = sport_dir / "test.tsv";
    config.rules = sport_dir / "rules.tsv";
    config.out_dir = scratch / fmt::format("sweep-{}", seed);
    config.seed = seed;
    config.dim = kSmallDim;
    config.training = small_config(seed);
    for (const cli::SweepRow& row : cli::cmd_sweep_fraction(config, log)) {
      cells[{row.fraction, row.method}].push_back(row.hit1);
    }
  }
  bool pass = true;
  std::string detail;
  for (double f : {0.2, 0.5, 1.0}) {
    const double plus = median(cells.at({f, cli::SweepMethod::kSimplEPlus}));
    const double simple = median(cells.at({f, cli::SweepMethod::kSimplE}));
    const double logical = median(cells.at({f, cli::SweepMethod::kLogical}));
    const bool ok = plus >= std::max(simple, logical);
    pass &= ok;
    detail += fmt::format("{}{:.1f}: SimplE+ {:.3f} SimplE {:.3f} logical {:.3f}{}",
                          detail.empty() ? "" : "; ", f, plus, simple, logical,
                          ok ? "" : " (behind)");
  }
  return {pass, "median hit@1 at fraction " + detail};
}

Outcome criterion_expressivity() {
  const auto start = Clock::now();
  Rng rng = make_stream(derive_seed(0, "acceptance", 8), "worlds");
  std::size_t failures = 0, width_errors = 0;
  double block_margin = 1, incremental_margin = 1;
  for (int trial = 0; trial < 50; ++trial) {
    const WorldAssignment w = random_world(4, 3, 6, rng);
    const EmbeddingModel block = construct_block_model(w);
    const EmbeddingModel inc = construct_incremental_model(w);
    width_errors += block.entity_head.cols() != w.num_entities * w.num_relations + 1;
    width_errors += inc.entity_head.cols() != w.true_facts.size() + 1;
    const SeparationReport b = check_separation(block, w, 0.1);
    const SeparationReport i = check_separation(inc, w, 0.1);
    failures += !b.passed(0.1) + !i.passed(0.1);
    block_margin = std::min(block_margin, b.min_margin);
    incremental_margin = std::min(incremental_margin, i.min_margin);
  }
  const double secs = seconds_since(start);
  return {failures == 0 && width_errors == 0 && secs < 60,
          fmt::format("50 worlds: {} separation failures, {} width errors, min "
                      "margin block {:.4f} incremental {:.4f} (>=0.1); {:.2f}s",
                      failures, width_errors, block_margin, incremental_margin,
                      secs)};
}

// Largest score(h, r, t) - score(h, s, t) over direct rules and 1000 random
// non-negative entity pairs (or the inverse form for inverse rules).
double worst_violation(const EmbeddingModel& m,
                       std::span<const SubsumptionRule> rules, Rng& rng,
                       std::size_t* direct_checks) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const std::size_t k = m.entity_head.cols();
  double worst = -INFINITY;
  for (int pair = 0; pair < 1000; ++pair) {
    std::vector<double> hh(k), ht(k), th(k), tt(k);
    for (auto* v : {&hh, &ht, &th, &tt}) {
      for (double& x : *v) x = u(rng);
    }
    const EntityVectors h{hh, ht}, t{th, tt};
    for (const SubsumptionRule& rule : rules) {
      const double premise = score_vectors(m, h, rule.premise, t);
      const double conclusion = rule.direction == RuleDirection::kDirect
                                    ? score_vectors(m, h, rule.conclusion, t)
                                    : score_vectors(m, t, rule.conclusion, h);
      worst = std::max(worst, premise - conclusion);
      if (rule.direction == RuleDirection::kDirect) ++*direct_checks;
    }
  }
  return worst;
}

Outcome criterion_subsumption(const Dataset& sport, const Dataset& location,
                              const Table5& sport_runs,
                              const Table5& location_runs) {
  Rng rng = make_stream(derive_seed(0, "acceptance", 9), "pairs");
  double worst = -INFINITY;
  std::size_t states = 0, checks = 0;
  for (const Dataset* data : {&sport, &location}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      EmbeddingModel m = make_model(
          ModelConfig{ModelKind::kSimplEPlus, kSmallDim, Nonlinearity::kReLU,
                      data->vocab.num_entities(), data->vocab.num_relations()},
          ConstraintGraph(data->rules, data->vocab.relation_names()));
      Rng init = make_stream(seed, "acceptance-state");
      std::normal_distribution<double> n(0.0, 1.0);
      for (Param p : {Param::kEntityHead, Param::kEntityTail,
                      Param::kRelationFwd, Param::kRelationBwd,
                      Param::kDeltaFwd, Param::kDeltaBwd}) {
        for (double& v : param_matrix(m, p).values()) v = n(init);
      }
      worst = std::max(worst, worst_violation(m, data->rules, rng, &checks));
      ++states;
    }
  }
  for (const auto& [data, runs] :
       {std::pair{&sport, &sport_runs}, std::pair{&location, &location_runs}}) {
    for (const Run& r : runs->plus) {
      worst = std::max(worst, worst_violation(r.model, data->rules, rng, &checks));
      ++states;
    }
  }
  return {worst <= 1e-9,
          fmt::format("{} states ({} random, {} trained), {} direct-rule "
                      "checks; worst premise-minus-conclusion {:.3g} (<=1e-9)",
                      states, states - sport_runs.plus.size() -
                                  location_runs.plus.size(),
                      sport_runs.plus.size() + location_runs.plus.size(),
                      checks, worst)};
}

Outcome criterion_impossibility() {
  std::size_t models = 0, violations = 0;
  double identity_error = 0;
  for (ModelKind kind : {ModelKind::kSimplE, ModelKind::kComplEx}) {
    std::size_t found = 0;
    for (std::uint64_t seed = 0; found < 20; ++seed) {
      EmbeddingModel m = make_model(
          ModelConfig{kind, 8, Nonlinearity::kIdentity, 2, 2});
      Rng rng = make_stream(derive_seed(seed, "acceptance", 10), "model");
      std::normal_distribution<double> n(0.0, 0.5);
      for (Param p : {Param::kEntityHead, Param::kEntityTail,
                      Param::kRelationFwd, Param::kRelationBwd}) {
        for (double& v : param_matrix(m, p).values()) v = n(rng);
      }
      // Pick the direction with a strict witness at (e0, e1).
      SubsumptionRule rule{0, 1, RuleDirection::kDirect};
      if (probability(m, {0, 1, 1}) < probability(m, {0, 0, 1})) {
        rule = {1, 0, RuleDirection::kDirect};
      }
      if (probability(m, {0, rule.conclusion, 1}) ==
          probability(m, {0, rule.premise, 1})) {
        continue;
      }
      const Counterexample cx = subsumption_counterexample(m, rule, 0, 1);
      violations += cx.violates_order();
      identity_error = std::max(
          {identity_error,
           std::abs(cx.mu_conclusion_flipped - (1 - cx.mu_conclusion)),
           std::abs(cx.mu_premise_flipped - (1 - cx.mu_premise))});
      ++found;
      ++models;
    }
  }
  return {violations == models && identity_error <= 1e-12,
          fmt::format("{} of {} SimplE/ComplEx models reversed by -a; max "
                      "|mu(-a) - (1 - mu(a))| {:.2g} (<=1e-12)",
                      violations, models, identity_error)};
}

// Oracles for criterion 11.

double oracle_rank(const EmbeddingModel& m, const Triple& triple, Side side,
                   bool filtered, const TripleSet& known) {
  std::vector<std::pair<double, bool>> cands;
  for (EntityId e = 0; e < static_cast<EntityId>(m.num_entities()); ++e) {
    Triple c = triple;
    (side == Side::kHead ? c.head : c.tail) = e;
    if (filtered && c != triple && known.contains(c)) continue;
    cands.emplace_back(score(m, c), c == triple);
  }
  // Descending by score, the test triple first among ties.
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second > b.second;
  });
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].second) return static_cast<double>(i + 1);
  }
  return 0;
}

std::vector<Triple> random_triples(std::size_t count, std::size_t ne,
                                   std::size_t nr, Rng& rng) {
  std::uniform_int_distribution<EntityId> e(0, static_cast<EntityId>(ne) - 1);
  std::uniform_int_distribution<RelationId> r(0, static_cast<RelationId>(nr) - 1);
  TripleSet seen;
  std::vector<Triple> out;
  while (out.size() < count) {
    const Triple t{e(rng), r(rng), e(rng)};
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

Outcome criterion_oracles() {
  Rng rng = make_stream(derive_seed(0, "acceptance", 11), "oracles");

  // Ranking on toy stores.
  std::size_t ranks = 0, rank_mismatches = 0;
  for (int store = 0; store < 5; ++store) {
    const std::size_t ne = 50, nr = 3;
    EmbeddingModel m = make_model(
        ModelConfig{ModelKind::kSimplE, 3, Nonlinearity::kIdentity, ne, nr});
    std::uniform_int_distribution<int> small(-1, 1);
    for (Param p : {Param::kEntityHead, Param::kEntityTail,
                    Param::kRelationFwd, Param::kRelationBwd}) {
      for (double& v : param_matrix(m, p).values()) v = small(rng);
    }
    const auto train = random_triples(150, ne, nr, rng);
    const auto test = random_triples(20, ne, nr, rng);
    const std::vector<std::span<const Triple>> splits{train, test};
    const KnownIndex known(ne, nr, splits);
    TripleSet known_set(train.begin(), train.end());
    known_set.insert(test.begin(), test.end());
    const EvalReport report = evaluate(m, test, known);
    for (std::size_t i = 0; i < test.size(); ++i) {
      const TripleRanks& r = report.ranks[i];
      const double expected[] = {
          oracle_rank(m, test[i], Side::kHead, false, known_set),
          oracle_rank(m, test[i], Side::kTail, false, known_set),
          oracle_rank(m, test[i], Side::kHead, true, known_set),
          oracle_rank(m, test[i], Side::kTail, true, known_set)};
      const double got[] = {r.head_raw, r.tail_raw, r.head_filtered,
                            r.tail_filtered};
      for (int j = 0; j < 4; ++j) rank_mismatches += expected[j] != got[j];
      ranks += 4;
    }
  }

  // Closure against repeated full scans.
  std::size_t closures = 0, closure_mismatches = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto triples = random_triples(100, 15, 4, rng);
    std::vector<SubsumptionRule> rules;
    for (int i = 0; i < 4; ++i) {
      const RelationId p = static_cast<RelationId>(rng() % 4);
      const RelationId c = static_cast<RelationId>(rng() % 4);
      const auto d = rng() % 2 ? RuleDirection::kDirect : RuleDirection::kInverse;
      if (p != c || d == RuleDirection::kInverse) rules.push_back({p, c, d});
    }
    TripleSet scan(triples.begin(), triples.end());
    for (bool changed = true; changed;) {
      changed = false;
      const std::vector<Triple> snapshot(scan.begin(), scan.end());
      for (const Triple& t : snapshot) {
        for (const SubsumptionRule& rule : rules) {
          if (rule.premise == t.relation) {
            changed |= scan.insert(apply_rule(rule, t)).second;
          }
        }
      }
    }
    const ClosureResult c = forward_closure(triples, rules);
    bool same = c.members.size() == scan.size();
    for (const Triple& t : scan) same &= c.contains(t);
    closure_mismatches += !same;
    ++closures;
  }

  // Gradients against central differences, logistic phi keeps the loss
  // smooth everywhere.
  std::vector<SubsumptionRule> rules{{0, 1, RuleDirection::kDirect},
                                     {2, 1, RuleDirection::kInverse}};
  const std::vector<std::string> names{"r0", "r1", "r2"};
  double worst_rel = 0;
  int points = 0;
  for (ModelKind kind :
       {ModelKind::kSimplE, ModelKind::kSimplEPlus, ModelKind::kComplEx}) {
    const bool plus = kind == ModelKind::kSimplEPlus;
    EmbeddingModel m = make_model(
        ModelConfig{kind, 4, plus ? Nonlinearity::kLogistic : Nonlinearity::kIdentity,
                    8, 3},
        plus ? ConstraintGraph(rules, names) : ConstraintGraph{});
    std::normal_distribution<double> n(0.0, 0.7);
    for (Param p : {Param::kEntityHead, Param::kEntityTail, Param::kRelationFwd,
                    Param::kRelationBwd, Param::kDeltaFwd, Param::kDeltaBwd}) {
      for (double& v : param_matrix(m, p).values()) {
        // Keep delta away from the ReLU kink.
        v = n(rng);
        if (p >= Param::kDeltaFwd && std::abs(v) < 0.05) v = 0.5;
      }
    }
    const auto pos = random_triples(10, 8, 3, rng);
    const auto batch = negative_batch(pos, 1, 8, rng);
    Gradients grads(m);
    batch_loss(m, batch, 0.05, &grads);
    const int target = kind == ModelKind::kComplEx ? 34 : 33;
    for (int i = 0; i < target; ++i) {
      const std::size_t nparams = plus ? kNumParams : 4;
      const Param p = static_cast<Param>(rng() % nparams);
      Matrix& mat = param_matrix(m, p);
      const std::size_t r = rng() % mat.rows();
      const std::size_t c = rng() % mat.cols();
      double& x = mat(r, c);
      const double saved = x, h = 1e-6;
      x = saved + h;
      const double up = batch_loss(m, batch, 0.05);
      x = saved - h;
      const double down = batch_loss(m, batch, 0.05);
      x = saved;
      const double numeric = (up - down) / (2 * h);
      const double analytic = grads.matrix(p)(r, c);
      worst_rel = std::max(worst_rel, std::abs(numeric - analytic) /
                                          std::max({std::abs(numeric),
                                                    std::abs(analytic), 1e-4}));
      ++points;
    }
  }
  return {rank_mismatches == 0 && closure_mismatches == 0 && worst_rel < 1e-4,
          fmt::format("ranks {}/{} match the sort oracle; closures {}/{} match "
                      "repeated scans; {} gradient points, worst relative "
                      "error {:.2g} (<1e-4)",
                      ranks - rank_mismatches, ranks,
                      closures - closure_mismatches, closures, points,
                      worst_rel)};
}

int run_suite(const fs::path& data_dir, const std::set<int>& only,
              bool strict, const std::string& report_path) {
  const auto wanted = [&](int id) { return only.empty() || only.contains(id); };
  const fs::path scratch = fs::temp_directory_path() / "kgsub_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  std::ofstream report_file;
  if (!report_path.empty()) report_file.open(report_path);
  const auto emit = [&](const std::string& line) {
    std::cout << line << std::flush;
    if (report_file) report_file << line << std::flush;
  };
  int passed = 0, failed = 0;
  const auto report = [&](int id, const char* title, const Outcome& o) {
    (o.pass ? passed : failed)++;
    emit(fmt::format("{} {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", id, title,
                     o.detail));
  };

  const Dataset sport = load_fixture(data_dir / "sport");
  const Dataset location = load_fixture(data_dir / "location");
  Table5 sport_runs, location_runs;
  if (wanted(1) || wanted(6) || wanted(9)) sport_runs = run_table5(sport);
  if (wanted(2) || wanted(9)) location_runs = run_table5(location);
  if (wanted(1)) report(1, "Sport reproduction", criterion_sport(sport_runs));
  if (wanted(2)) {
    report(2, "Location reproduction", criterion_location(location_runs));
  }
  if (wanted(3)) {
    report(3, "Logical baseline", criterion_logical(sport, location));
  }
  if (wanted(4) || wanted(5)) {
    const Dataset wn18 = load_fixture(data_dir / "wn18-desk");
    const Wn18Runs runs = run_wn18(wn18);
    if (wanted(4)) {
      report(4, "Non-negativity sanity", criterion_nonnegativity(runs));
    }
    if (wanted(5)) {
      report(5, "Nonlinearity trend", criterion_nonlinearity(runs));
    }
  }
  if (wanted(6)) {
    report(6, "Convergence trend", criterion_convergence(sport_runs));
  }
  if (wanted(7)) {
    report(7, "Fraction sweep trend",
           criterion_sweep(data_dir / "sport", scratch));
  }
  if (wanted(8)) report(8, "Expressivity", criterion_expressivity());
  if (wanted(9)) {
    report(9, "Subsumption guarantee",
           criterion_subsumption(sport, location, sport_runs, location_runs));
  }
  if (wanted(10)) report(10, "Impossibility check", criterion_impossibility());
  if (wanted(11)) report(11, "Oracle equivalences", criterion_oracles());

  emit(fmt::format("{} passed, {} failed\n", passed, failed));
  return strict && failed > 0 ? 1 : 0;
}

}  // namespace
}  // namespace kgsub

int main(int argc, char** argv) {
  CLI::App app{"kgsub acceptance suite"};
  std::string data_dir = "data";
  std::vector<int> only;
  bool strict = false;
  std::string report;
  app.add_option("--data-dir", data_dir, "Fixture directory")->check(CLI::ExistingDirectory);
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_flag("--strict", strict, "Exit with 1 when any criterion fails");
  app.add_option("--report", report, "Also write the result lines to this file");
  CLI11_PARSE(app, argc, argv);
  try {
    return kgsub::run_suite(data_dir, {only.begin(), only.end()}, strict,
                             report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
