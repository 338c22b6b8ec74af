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

#ifndef KGSUB_CLI_RUN_CONFIG_H_
#define KGSUB_CLI_RUN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgsub/checkpoint.h"
#include "kgsub/evaluation.h"
#include "kgsub/models.h"
#include "kgsub/training.h"

namespace kgsub::cli {

enum class SweepMethod { kSimplE, kSimplEPlus, kLogical };

std::string_view to_string(SweepMethod method);
SweepMethod parse_sweep_method(std::string_view name);  // simple|simple-plus|logical

// Everything a command needs. Field names match the long option names and
// the keys of a --config file.
struct RunConfig {
  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> valid;
  std::optional<std::filesystem::path> test;
  std::optional<std::filesystem::path> rules;
  std::optional<std::filesystem::path> checkpoint;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;

  ModelKind model = ModelKind::kSimplEPlus;
  Nonlinearity phi = Nonlinearity::kReLU;
  std::size_t dim = 50;
  TrainConfig training;  // training.seed mirrors seed
  // Unset: enforce rules when a rules file is given and the model is SimplE+.
  std::optional<bool> constrained;
  bool strip = false;  // train on the redundancy-stripped training split
  CheckpointFormat checkpoint_format = CheckpointFormat::kText;
  bool loss_header = true;  // first line of loss.csv is `epoch,loss`

  bool filtered = true;  // metric used for single-number summaries
  std::vector<TieMode> tie_modes{TieMode::kOptimistic};
  bool write_ranks = false;
  std::size_t threads = 0;

  std::vector<double> fractions{0.2, 0.5, 1.0};
  std::vector<SweepMethod> methods{SweepMethod::kSimplE,
                                   SweepMethod::kSimplEPlus,
                                   SweepMethod::kLogical};

  std::size_t max_entities = 4;
  std::size_t max_relations = 3;
  std::size_t max_facts = 6;
  std::size_t trials = 50;
  double margin = 0.1;
  bool sabotage = false;  // run the constructions exactly as printed

  // Whether rules are tied into the model.
  bool enforce_constraints() const;
};

enum class Verb {
  kTrain,
  kEvaluate,
  kSweepFraction,
  kStripRedundant,
  kInferLogical,
  kCheckExpressivity,
};

std::string_view to_string(Verb verb);

// Checks everything that can be checked before compute: required paths are
// present and exist, numeric ranges, model/rule compatibility. Throws
// ConfigError.
void validate(const RunConfig& config, Verb verb);

// Resolved configuration as ordered key=value pairs, readable back through
// --config.
std::vector<std::pair<std::string, std::string>> to_key_values(
    const RunConfig& config);

}  // namespace kgsub::cli

#endif  // KGSUB_CLI_RUN_CONFIG_H_
