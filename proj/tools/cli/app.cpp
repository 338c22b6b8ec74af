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

#include "cli/app.h"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "cli/commands.h"
#include "cli/run_config.h"
#include "kgsub/error.h"

namespace kgsub::cli {
namespace {

// Raw option values; strings are resolved into RunConfig after parsing so
// that bad enum names surface as config errors.
struct Options {
  std::string train, valid, test, rules, checkpoint;
  std::string model = "simple-plus";
  std::string phi = "relu";
  std::string optimizer = "adagrad";
  std::string constrained;
  std::string checkpoint_format = "text";
  std::string tie_mode = "optimistic";
  std::vector<std::string> methods{"simple", "simple-plus", "logical"};
};

std::optional<std::filesystem::path> as_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

void resolve(const Options& o, RunConfig& c) {
  c.train = as_path(o.train);
  c.valid = as_path(o.valid);
  c.test = as_path(o.test);
  c.rules = as_path(o.rules);
  c.checkpoint = as_path(o.checkpoint);
  try {
    c.model = parse_model_kind(o.model);
    c.phi = parse_nonlinearity(o.phi);
    c.training.optimizer = parse_optimizer(o.optimizer);
    c.tie_modes.clear();
    if (o.tie_mode == "both") {
      c.tie_modes = {TieMode::kOptimistic, TieMode::kExpected};
    } else {
      c.tie_modes = {parse_tie_mode(o.tie_mode)};
    }
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (c.model != ModelKind::kSimplEPlus) c.phi = Nonlinearity::kIdentity;
  if (o.constrained == "true") {
    c.constrained = true;
  } else if (o.constrained == "false") {
    c.constrained = false;
  } else if (!o.constrained.empty()) {
    throw ConfigError("--constrained expects true or false");
  }
  if (o.checkpoint_format == "text") {
    c.checkpoint_format = CheckpointFormat::kText;
  } else if (o.checkpoint_format == "binary") {
    c.checkpoint_format = CheckpointFormat::kBinary;
  } else {
    throw ConfigError("--checkpoint-format expects text or binary");
  }
  c.methods.clear();
  for (const auto& m : o.methods) c.methods.push_back(parse_sweep_method(m));
  c.training.seed = c.seed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Knowledge graph completion with subsumption-aware embeddings",
               "kgsub"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file; command-line flags win");
  app.get_config_ptr()->group("Common");

  RunConfig c;
  Options o;
  // Options live on the top-level app so one flat config file serves every
  // verb; subcommands fall through to them.
  const std::string data = "Data";
  app.add_option("--train", o.train, "Training triples (TSV)")->group(data);
  app.add_option("--valid", o.valid, "Validation triples (TSV)")->group(data);
  app.add_option("--test", o.test, "Test triples (TSV)")->group(data);
  app.add_option("--rules", o.rules, "Subsumption rules (TSV)")->group(data);
  app.add_option("--checkpoint", o.checkpoint, "Model checkpoint to evaluate")
      ->group(data);
  const std::string common = "Common";
  app.add_option("--out-dir", c.out_dir, "Output directory")->group(common);
  app.add_option("--seed", c.seed, "Run seed")->group(common);
  app.add_option("--threads", c.threads, "Worker threads (0: all cores)")
      ->group(common);

  const std::string model = "Model and training";
  app.add_option("--model", o.model, "simple | simple-plus | complex")
      ->group(model);
  app.add_option("--phi", o.phi, "relu | logistic | exp (SimplE+ only)")
      ->group(model);
  app.add_option("--dim", c.dim, "Embedding size k")->group(model);
  app.add_option("--epochs", c.training.epochs)->group(model);
  app.add_option("--batch-size", c.training.batch_size)->group(model);
  app.add_option("--neg-ratio", c.training.neg_ratio,
                 "Corruptions per positive")
      ->group(model);
  app.add_option("--learning-rate", c.training.learning_rate)->group(model);
  app.add_option("--l2-lambda", c.training.l2_lambda,
                 "L2 coefficient per epoch")
      ->group(model);
  app.add_option("--optimizer", o.optimizer, "adagrad | sgd")->group(model);
  app.add_option("--constrained", o.constrained,
                 "true | false: tie rules into SimplE+ (default: when rules "
                 "are given)")
      ->group(model);
  app.add_flag("--strip", c.strip,
               "Drop training triples derivable from the others first")
      ->group(model);
  app.add_option("--checkpoint-format", o.checkpoint_format, "text | binary")
      ->group(model);
  app.add_flag("--loss-header,!--no-loss-header", c.loss_header,
               "Write the epoch,loss header line in loss.csv (default on)")
      ->group(model);

  const std::string eval = "Evaluation";
  app.add_flag("--filtered,!--raw", c.filtered,
               "Summarise with filtered (default) or raw metrics")
      ->group(eval);
  app.add_option("--tie-mode", o.tie_mode, "optimistic | expected | both")
      ->group(eval);
  app.add_flag("--ranks", c.write_ranks, "Also write per-triple ranks CSV")
      ->group(eval);

  const std::string sweep = "Fraction sweep";
  app.add_option("--fractions", c.fractions, "Training fractions in (0, 1]")
      ->delimiter(',')
      ->group(sweep);
  app.add_option("--methods", o.methods, "simple, simple-plus, logical")
      ->delimiter(',')
      ->group(sweep);

  const std::string expr = "Expressivity check";
  app.add_option("--max-entities", c.max_entities)->group(expr);
  app.add_option("--max-relations", c.max_relations)->group(expr);
  app.add_option("--max-facts", c.max_facts)->group(expr);
  app.add_option("--trials", c.trials)->group(expr);
  app.add_option("--margin", c.margin, "Required distance from 0.5")
      ->group(expr);
  app.add_flag("--sabotage", c.sabotage,
               "Use the constructions exactly as printed (expected to fail)")
      ->group(expr);

  struct VerbSpec {
    Verb verb;
    const char* help;
  };
  const VerbSpec verbs[] = {
      {Verb::kTrain, "Train a model; writes checkpoint, loss.csv, manifest"},
      {Verb::kEvaluate, "Rank test triples with a checkpoint"},
      {Verb::kSweepFraction, "hit@1 per training fraction and method"},
      {Verb::kStripRedundant, "Remove training triples implied by the rules"},
      {Verb::kInferLogical, "Rule closure of the training triples"},
      {Verb::kCheckExpressivity,
       "Check the full-expressivity constructions on random worlds"},
  };
  std::optional<Verb> chosen;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(std::string(to_string(v.verb)), v.help);
    sub->fallthrough();
    sub->callback([&chosen, verb = v.verb] { chosen = verb; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    resolve(o, c);
    switch (*chosen) {
      case Verb::kTrain:
        cmd_train(c, out);
        break;
      case Verb::kEvaluate:
        cmd_evaluate(c, out);
        break;
      case Verb::kSweepFraction:
        cmd_sweep_fraction(c, out);
        break;
      case Verb::kStripRedundant:
        cmd_strip_redundant(c, out);
        break;
      case Verb::kInferLogical:
        cmd_infer_logical(c, out);
        break;
      case Verb::kCheckExpressivity: {
        const ExpressivitySummary s = cmd_check_expressivity(c, out);
        if (!s.passed()) {
          err << fmt::format(
              "error: check: {} block, {} incremental, {} width failures in "
              "{} worlds\n",
              s.block_failures, s.incremental_failures, s.width_failures,
              s.trials);
          return 1;
        }
        break;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.category() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace kgsub::cli
