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

#include "cli/commands.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "cli/manifest.h"
#include "json.hpp"
#include "kgsub/analysis.h"
#include "kgsub/checkpoint.h"
#include "kgsub/error.h"
#include "kgsub/logic.h"
#include "kgsub/rng.h"

namespace kgsub::cli {
namespace {

Dataset load(const RunConfig& config) {
  return load_dataset(
      DatasetPaths{*config.train, config.valid, config.test, config.rules});
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void prepare_out_dir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create {}: {}", config.out_dir.string(),
                              ec.message()));
  }
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

}  // namespace

EmbeddingModel fit_model(const Dataset& data, std::span<const Triple> train,
                         ModelKind kind, Nonlinearity phi, std::size_t dim,
                         const TrainConfig& training, bool constrained,
                         LossTrace* trace) {
  const ModelConfig mc{kind, dim, phi, data.vocab.num_entities(),
                       data.vocab.num_relations()};
  ConstraintGraph graph;
  if (constrained) graph = ConstraintGraph(data.rules, data.vocab.relation_names());
  EmbeddingModel model = init_params(mc, training.seed, std::move(graph));
  LossTrace t = kgsub::train(model, train, training);
  if (trace) *trace = std::move(t);
  return model;
}

TrainResult cmd_train(const RunConfig& config, std::ostream& log) {
  validate(config, Verb::kTrain);
  prepare_out_dir(config);
  const Dataset data = load(config);
  std::vector<Triple> train(data.store.train().begin(),
                            data.store.train().end());
  if (config.strip) {
    StripResult s = strip_redundant(train, data.rules);
    log << fmt::format("stripped {} redundant training triples\n",
                       s.removed.size());
    train = std::move(s.kept);
  }

  TrainConfig training = config.training;
  training.seed = config.seed;
  TrainResult result;
  result.train_triples = train.size();
  EmbeddingModel model =
      fit_model(data, train, config.model, config.phi, config.dim, training,
                config.enforce_constraints(), &result.trace);
  const double violation = max_order_violation(model);
  if (violation > 0.0) {
    throw NumericError(
        fmt::format("subsumption order violated by {} at save", violation));
  }

  result.checkpoint = config.out_dir / "model.ckpt";
  save_checkpoint(result.checkpoint, Checkpoint{model, data.vocab, data.rules},
                  config.checkpoint_format);
  const auto loss_path = config.out_dir / "loss.csv";
  {
    auto out = open_output(loss_path);
    write_loss_csv(out, result.trace, config.loss_header);
  }
  const std::vector<std::filesystem::path> outputs{result.checkpoint,
                                                   loss_path};
  write_manifest(config, Verb::kTrain, outputs);
  if (!result.trace.epochs.empty()) {
    log << fmt::format("trained {} on {} triples, final loss {:.6f}\n",
                       to_string(config.model), train.size(),
                       result.trace.epochs.back().loss);
  }
  return result;
}

EvaluateResult cmd_evaluate(const RunConfig& config, std::ostream& log) {
  validate(config, Verb::kEvaluate);
  prepare_out_dir(config);
  Checkpoint ckpt = load_checkpoint(*config.checkpoint);
  Vocabulary vocab = ckpt.vocab;
  auto read = [&](const std::optional<std::filesystem::path>& p) {
    if (!p) return std::vector<Triple>{};
    return read_triple_file(*p, vocab, VocabMode::kFrozen);
  };
  const std::vector<Triple> test = read(config.test);
  const std::vector<Triple> train = read(config.train);
  const std::vector<Triple> valid = read(config.valid);
  const std::vector<std::span<const Triple>> splits{train, valid, test};
  const KnownIndex known(vocab.num_entities(), vocab.num_relations(), splits);

  EvaluateResult result;
  std::vector<std::filesystem::path> outputs;
  const bool suffix = config.tie_modes.size() > 1;
  for (TieMode mode : config.tie_modes) {
    EvalReport report =
        evaluate(ckpt.model, test, known, EvalOptions{mode, config.threads});
    const std::string tag =
        suffix ? fmt::format(".{}", to_string(mode)) : std::string();
    const auto json_path = config.out_dir / ("report" + tag + ".json");
    const auto table_path = config.out_dir / ("report" + tag + ".txt");
    {
      auto out = open_output(json_path);
      write_report_json(out, report);
    }
    {
      auto out = open_output(table_path);
      write_report_table(out, report);
    }
    outputs.push_back(json_path);
    outputs.push_back(table_path);
    if (config.write_ranks) {
      const auto ranks_path = config.out_dir / ("ranks" + tag + ".csv");
      auto out = open_output(ranks_path);
      write_rank_csv(out, report, vocab);
      outputs.push_back(ranks_path);
    }
    if (suffix) log << "tie mode: " << to_string(mode) << '\n';
    write_report_table(log, report);
    result.reports.push_back(std::move(report));
  }
  write_manifest(config, Verb::kEvaluate, outputs);
  return result;
}

std::vector<SweepRow> cmd_sweep_fraction(const RunConfig& config,
                                         std::ostream& log) {
  validate(config, Verb::kSweepFraction);
  prepare_out_dir(config);
  const Dataset data = load(config);
  TripleStore base = data.store;
  if (config.strip) {
    base = base.with_train(strip_redundant(base.train(), data.rules).kept);
  }

  std::vector<double> fractions = config.fractions;
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()),
                  fractions.end());
  std::vector<SweepMethod> methods = config.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  // Each fraction gets its own subsample and training seed, shared by all
  // methods so they see the same data.
  std::vector<TripleStore> subsets;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    subsets.push_back(subsample_train(
        base, fractions[i], derive_seed(config.seed, "sweep-subsample", i)));
  }

  std::vector<SweepRow> rows(fractions.size() * methods.size());
  const std::size_t workers = worker_count(config.threads, rows.size());
  const std::size_t eval_threads = workers > 1 ? 1 : config.threads;
  auto run_cell = [&](std::size_t cell) {
    const std::size_t fi = cell / methods.size();
    const SweepMethod method = methods[cell % methods.size()];
    const TripleStore& store = subsets[fi];
    SweepRow row{fractions[fi], method, 0.0};
    if (method == SweepMethod::kLogical) {
      row.hit1 = logical_hit1(store.test(),
                              forward_closure(store.train(), data.rules));
    } else {
      TrainConfig training = config.training;
      training.seed = derive_seed(config.seed, "sweep-train", fi);
      const bool plus = method == SweepMethod::kSimplEPlus;
      const EmbeddingModel model = fit_model(
          data, store.train(), plus ? ModelKind::kSimplEPlus : ModelKind::kSimplE,
          plus ? config.phi : Nonlinearity::kIdentity, config.dim, training,
          plus && !data.rules.empty() && config.constrained.value_or(true));
      const EvalReport report =
          evaluate(model, store.test(), store.known(),
                   EvalOptions{config.tie_modes.front(), eval_threads});
      row.hit1 = (config.filtered ? report.filtered : report.raw).hits.at(1);
    }
    rows[cell] = row;
  };

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t c = next++; c < rows.size(); c = next++) run_cell(c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const auto csv_path = config.out_dir / "sweep.csv";
  {
    auto out = open_output(csv_path);
    out << "fraction,method,hit1\n";
    for (const SweepRow& r : rows) {
      out << fmt::format("{},{},{:.6f}\n", r.fraction, to_string(r.method),
                         r.hit1);
    }
  }
  for (const SweepRow& r : rows) {
    log << fmt::format("fraction {:<5} {:<12} hit@1 {:.4f}\n", r.fraction,
                       to_string(r.method), r.hit1);
  }
  const std::vector<std::filesystem::path> outputs{csv_path};
  write_manifest(config, Verb::kSweepFraction, outputs);
  return rows;
}

StripSummary cmd_strip_redundant(const RunConfig& config, std::ostream& log) {
  validate(config, Verb::kStripRedundant);
  prepare_out_dir(config);
  const Dataset data = load_dataset(
      DatasetPaths{*config.train, std::nullopt, std::nullopt, config.rules});
  const StripResult s = strip_redundant(data.store.train(), data.rules);
  const auto kept_path = config.out_dir / "train.reduced.tsv";
  const auto removed_path = config.out_dir / "removed.tsv";
  write_triple_file(kept_path, s.kept, data.vocab);
  write_triple_file(removed_path, s.removed, data.vocab);
  log << fmt::format("kept {} triples, removed {} redundant\n", s.kept.size(),
                     s.removed.size());
  const std::vector<std::filesystem::path> outputs{kept_path, removed_path};
  write_manifest(config, Verb::kStripRedundant, outputs);
  return {s.kept.size(), s.removed.size()};
}

InferSummary cmd_infer_logical(const RunConfig& config, std::ostream& log) {
  validate(config, Verb::kInferLogical);
  prepare_out_dir(config);
  const Dataset data = load_dataset(
      DatasetPaths{*config.train, std::nullopt, config.test, config.rules});
  std::vector<Triple> train(data.store.train().begin(),
                            data.store.train().end());
  if (config.strip) train = strip_redundant(train, data.rules).kept;
  const ClosureResult closure = forward_closure(train, data.rules);

  InferSummary summary;
  summary.input = train.size();
  const std::vector<Triple> derived(closure.derived.begin() +
                                        static_cast<std::ptrdiff_t>(train.size()),
                                    closure.derived.end());
  summary.derived = derived.size();
  const auto derived_path = config.out_dir / "derived.tsv";
  write_triple_file(derived_path, derived, data.vocab);
  std::vector<std::filesystem::path> outputs{derived_path};
  log << fmt::format("{} input triples, {} derived\n", summary.input,
                     summary.derived);

  if (config.test) {
    summary.hit1 = logical_hit1(data.store.test(), closure);
    const auto json_path = config.out_dir / "logical.json";
    nlohmann::ordered_json doc;
    doc["num_test"] = data.store.test().size();
    doc["hit1"] = *summary.hit1;
    open_output(json_path) << doc.dump(2) << '\n';
    outputs.push_back(json_path);
    log << fmt::format("logical hit@1 {:.4f}\n", *summary.hit1);
  }
  write_manifest(config, Verb::kInferLogical, outputs);
  return summary;
}

ExpressivitySummary cmd_check_expressivity(const RunConfig& config,
                                           std::ostream& log) {
  validate(config, Verb::kCheckExpressivity);
  prepare_out_dir(config);
  const ProofVariant variant =
      config.sabotage ? ProofVariant::kLiteral : ProofVariant::kRepaired;

  ExpressivitySummary summary;
  summary.trials = config.trials;
  summary.block_min_margin = summary.incremental_min_margin =
      std::numeric_limits<double>::infinity();
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    Rng rng = make_stream(derive_seed(config.seed, "expressivity", trial),
                          "world");
    const WorldAssignment world = random_world(
        config.max_entities, config.max_relations, config.max_facts, rng);
    const EmbeddingModel block = construct_block_model(world, variant);
    const EmbeddingModel inc = construct_incremental_model(world, variant);
    const SeparationReport br = check_separation(block, world, config.margin);
    const SeparationReport ir = check_separation(inc, world, config.margin);
    const bool block_width =
        block.dim == world.num_entities * world.num_relations + 1;
    const bool inc_width = inc.dim == world.true_facts.size() + 1;
    summary.block_min_margin = std::min(summary.block_min_margin, br.min_margin);
    summary.incremental_min_margin =
        std::min(summary.incremental_min_margin, ir.min_margin);
    summary.block_failures += br.passed(config.margin) ? 0 : 1;
    summary.incremental_failures += ir.passed(config.margin) ? 0 : 1;
    summary.width_failures += (block_width && inc_width) ? 0 : 1;
    log << fmt::format(
        "world {:>3}: |E|={} |R|={} |facts|={}  block {} ({:+.4f})  "
        "incremental {} ({:+.4f})\n",
        trial, world.num_entities, world.num_relations,
        world.true_facts.size(),
        br.passed(config.margin) && block_width ? "pass" : "FAIL",
        br.min_margin, ir.passed(config.margin) && inc_width ? "pass" : "FAIL",
        ir.min_margin);
    if (!br.passed(config.margin) || !ir.passed(config.margin) ||
        !block_width || !inc_width) {
      failures.push_back({{"trial", trial},
                          {"entities", world.num_entities},
                          {"relations", world.num_relations},
                          {"facts", world.true_facts.size()},
                          {"block_misclassified", br.misclassified},
                          {"block_min_margin", br.min_margin},
                          {"incremental_misclassified", ir.misclassified},
                          {"incremental_min_margin", ir.min_margin}});
    }
  }

  nlohmann::ordered_json doc;
  doc["variant"] = config.sabotage ? "literal" : "repaired";
  doc["trials"] = summary.trials;
  doc["margin"] = config.margin;
  doc["block_failures"] = summary.block_failures;
  doc["incremental_failures"] = summary.incremental_failures;
  doc["width_failures"] = summary.width_failures;
  doc["block_min_margin"] = summary.block_min_margin;
  doc["incremental_min_margin"] = summary.incremental_min_margin;
  doc["passed"] = summary.passed();
  doc["failures"] = failures;
  const auto json_path = config.out_dir / "expressivity.json";
  open_output(json_path) << doc.dump(2) << '\n';

  log << fmt::format("block construction:       {}/{} worlds separated, min margin {:.4f}\n",
                     summary.trials - summary.block_failures, summary.trials,
                     summary.block_min_margin);
  log << fmt::format("incremental construction: {}/{} worlds separated, min margin {:.4f}\n",
                     summary.trials - summary.incremental_failures,
                     summary.trials, summary.incremental_min_margin);
  log << fmt::format("embedding widths:         {}/{} as expected\n",
                     summary.trials - summary.width_failures, summary.trials);
  log << (summary.passed() ? "result: pass\n" : "result: fail\n");
  const std::vector<std::filesystem::path> outputs{json_path};
  write_manifest(config, Verb::kCheckExpressivity, outputs);
  return summary;
}

}  // namespace kgsub::cli
