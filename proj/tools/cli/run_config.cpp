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

#include "cli/run_config.h"

#include <fmt/format.h>

#include "kgsub/error.h"

namespace kgsub::cli {
namespace {

void require_file(const std::optional<std::filesystem::path>& path,
                  std::string_view key, bool required) {
  if (!path) {
    if (required) throw ConfigError(fmt::format("--{} is required", key));
    return;
  }
  if (!std::filesystem::is_regular_file(*path)) {
    throw ConfigError(
        fmt::format("--{}: file not found: {}", key, path->string()));
  }
}

std::string join_fractions(const std::vector<double>& values) {
  std::string out;
  for (double v : values) out += (out.empty() ? "" : ",") + fmt::format("{}", v);
  return out;
}

}  // namespace

std::string_view to_string(SweepMethod method) {
  switch (method) {
    case SweepMethod::kSimplE:
      return "simple";
    case SweepMethod::kSimplEPlus:
      return "simple-plus";
    case SweepMethod::kLogical:
      return "logical";
  }
  return "?";
}

SweepMethod parse_sweep_method(std::string_view name) {
  if (name == "simple") return SweepMethod::kSimplE;
  if (name == "simple-plus") return SweepMethod::kSimplEPlus;
  if (name == "logical") return SweepMethod::kLogical;
  throw ConfigError(fmt::format("unknown sweep method '{}'", name));
}

std::string_view to_string(Verb verb) {
  switch (verb) {
    case Verb::kTrain:
      return "train";
    case Verb::kEvaluate:
      return "evaluate";
    case Verb::kSweepFraction:
      return "sweep-fraction";
    case Verb::kStripRedundant:
      return "strip-redundant";
    case Verb::kInferLogical:
      return "infer-logical";
    case Verb::kCheckExpressivity:
      return "check-expressivity";
  }
  return "?";
}

bool RunConfig::enforce_constraints() const {
  return rules.has_value() &&
         constrained.value_or(model == ModelKind::kSimplEPlus);
}

void validate(const RunConfig& config, Verb verb) {
  auto check_training = [&](bool check_model) {
    if (config.dim == 0) throw ConfigError("--dim must be at least 1");
    try {
      validate(config.training);
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
    if (config.constrained.value_or(false) && !config.rules) {
      throw ConfigError("--constrained needs a --rules file");
    }
    if (check_model && config.enforce_constraints() &&
        config.model != ModelKind::kSimplEPlus) {
      throw ConfigError(fmt::format(
          "rule constraints need --model simple-plus, got {} "
          "(pass --constrained false to ignore the rules)",
          to_string(config.model)));
    }
  };

  switch (verb) {
    case Verb::kTrain:
      require_file(config.train, "train", true);
      require_file(config.valid, "valid", false);
      require_file(config.test, "test", false);
      require_file(config.rules, "rules", config.strip);
      check_training(true);
      break;
    case Verb::kEvaluate:
      require_file(config.checkpoint, "checkpoint", true);
      require_file(config.test, "test", true);
      require_file(config.train, "train", false);
      require_file(config.valid, "valid", false);
      if (config.tie_modes.empty()) throw ConfigError("--tie-mode is empty");
      break;
    case Verb::kSweepFraction: {
      require_file(config.train, "train", true);
      require_file(config.valid, "valid", false);
      require_file(config.test, "test", true);
      bool needs_rules = config.strip;
      for (SweepMethod m : config.methods) {
        needs_rules = needs_rules || m == SweepMethod::kLogical;
      }
      require_file(config.rules, "rules", needs_rules);
      check_training(false);
      if (config.fractions.empty() || config.methods.empty()) {
        throw ConfigError("--fractions and --methods must be non-empty");
      }
      for (double f : config.fractions) {
        if (!(f > 0.0 && f <= 1.0)) {
          throw ConfigError(fmt::format("fraction {} is outside (0, 1]", f));
        }
      }
      break;
    }
    case Verb::kStripRedundant:
    case Verb::kInferLogical:
      require_file(config.train, "train", true);
      require_file(config.rules, "rules", true);
      require_file(config.test, "test", false);
      break;
    case Verb::kCheckExpressivity:
      if (config.max_entities == 0 || config.max_relations == 0) {
        throw ConfigError("--max-entities and --max-relations must be >= 1");
      }
      if (config.max_entities * config.max_relations * config.max_entities >
          10000) {
        throw ConfigError("world too large to enumerate (|E||R||E| > 10^4)");
      }
      if (config.trials == 0) throw ConfigError("--trials must be >= 1");
      break;
  }
}

std::vector<std::pair<std::string, std::string>> to_key_values(
    const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  auto path = [&](std::string key,
                  const std::optional<std::filesystem::path>& p) {
    if (p) kv.emplace_back(std::move(key), p->generic_string());
  };
  path("train", c.train);
  path("valid", c.valid);
  path("test", c.test);
  path("rules", c.rules);
  path("checkpoint", c.checkpoint);
  kv.emplace_back("out-dir", c.out_dir.generic_string());
  kv.emplace_back("seed", fmt::format("{}", c.seed));
  kv.emplace_back("model", std::string(to_string(c.model)));
  kv.emplace_back("phi", std::string(to_string(c.phi)));
  kv.emplace_back("dim", fmt::format("{}", c.dim));
  kv.emplace_back("epochs", fmt::format("{}", c.training.epochs));
  kv.emplace_back("batch-size", fmt::format("{}", c.training.batch_size));
  kv.emplace_back("neg-ratio", fmt::format("{}", c.training.neg_ratio));
  kv.emplace_back("learning-rate", fmt::format("{}", c.training.learning_rate));
  kv.emplace_back("l2-lambda", fmt::format("{}", c.training.l2_lambda));
  kv.emplace_back("optimizer", std::string(to_string(c.training.optimizer)));
  if (c.constrained) {
    kv.emplace_back("constrained", *c.constrained ? "true" : "false");
  }
  kv.emplace_back("strip", c.strip ? "true" : "false");
  kv.emplace_back("checkpoint-format",
                  c.checkpoint_format == CheckpointFormat::kText ? "text"
                                                                 : "binary");
  kv.emplace_back("loss-header", c.loss_header ? "true" : "false");
  kv.emplace_back("filtered", c.filtered ? "true" : "false");
  std::string ties;
  for (TieMode m : c.tie_modes) {
    ties += (ties.empty() ? "" : ",") + std::string(to_string(m));
  }
  kv.emplace_back("tie-mode", ties);
  kv.emplace_back("ranks", c.write_ranks ? "true" : "false");
  kv.emplace_back("fractions", join_fractions(c.fractions));
  std::string methods;
  for (SweepMethod m : c.methods) {
    methods += (methods.empty() ? "" : ",") + std::string(to_string(m));
  }
  kv.emplace_back("methods", methods);
  kv.emplace_back("max-entities", fmt::format("{}", c.max_entities));
  kv.emplace_back("max-relations", fmt::format("{}", c.max_relations));
  kv.emplace_back("max-facts", fmt::format("{}", c.max_facts));
  kv.emplace_back("trials", fmt::format("{}", c.trials));
  kv.emplace_back("margin", fmt::format("{}", c.margin));
  kv.emplace_back("sabotage", c.sabotage ? "true" : "false");
  return kv;
}

}  // namespace kgsub::cli
