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

#ifndef KGSUB_CLI_COMMANDS_H_
#define KGSUB_CLI_COMMANDS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cli/run_config.h"
#include "kgsub/evaluation.h"
#include "kgsub/kg_data.h"
#include "kgsub/models.h"
#include "kgsub/training.h"

namespace kgsub::cli {

// Initialises and trains one model on `train`. Rules are tied into the model
// only when `constrained` is set (SimplE+ only).
EmbeddingModel fit_model(const Dataset& data, std::span<const Triple> train,
                         ModelKind kind, Nonlinearity phi, std::size_t dim,
                         const TrainConfig& training, bool constrained,
                         LossTrace* trace = nullptr);

struct TrainResult {
  std::filesystem::path checkpoint;
  LossTrace trace;
  std::size_t train_triples = 0;  // after optional stripping
};
// Writes model.ckpt, loss.csv, manifest.json and config.txt to out_dir.
TrainResult cmd_train(const RunConfig& config, std::ostream& log);

struct EvaluateResult {
  std::vector<EvalReport> reports;  // one per requested tie mode
};
// Writes report[.<tie>].json, report[.<tie>].txt and, with ranks set,
// ranks[.<tie>].csv. Filtering uses every split passed (train, valid, test).
EvaluateResult cmd_evaluate(const RunConfig& config, std::ostream& log);

struct SweepRow {
  double fraction = 0.0;
  SweepMethod method = SweepMethod::kSimplE;
  double hit1 = 0.0;
};
// Writes sweep.csv (`fraction,method,hit1`), rows sorted by fraction, then
// method.
std::vector<SweepRow> cmd_sweep_fraction(const RunConfig& config,
                                         std::ostream& log);

struct StripSummary {
  std::size_t kept = 0;
  std::size_t removed = 0;
};
// Writes train.reduced.tsv and removed.tsv.
StripSummary cmd_strip_redundant(const RunConfig& config, std::ostream& log);

struct InferSummary {
  std::size_t input = 0;
  std::size_t derived = 0;  // closure triples not in the input
  std::optional<double> hit1;  // logical hit@1 when a test file is given
};
// Writes derived.tsv and, with a test file, logical.json.
InferSummary cmd_infer_logical(const RunConfig& config, std::ostream& log);

struct ExpressivitySummary {
  std::size_t trials = 0;
  std::size_t block_failures = 0;
  std::size_t incremental_failures = 0;
  std::size_t width_failures = 0;
  double block_min_margin = 0.0;
  double incremental_min_margin = 0.0;
  bool passed() const {
    return block_failures == 0 && incremental_failures == 0 &&
           width_failures == 0;
  }
};
// Writes expressivity.json.
ExpressivitySummary cmd_check_expressivity(const RunConfig& config,
                                           std::ostream& log);

}  // namespace kgsub::cli

#endif  // KGSUB_CLI_COMMANDS_H_
