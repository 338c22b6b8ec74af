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

#ifndef KGSUB_TRAINING_H_
#define KGSUB_TRAINING_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "kgsub/kg_data.h"
#include "kgsub/models.h"
#include "kgsub/rng.h"

namespace kgsub {

enum class OptimizerKind { kSGD, kAdaGrad };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);  // sgd|adagrad

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 100;
  std::size_t neg_ratio = 1;
  double learning_rate = 0.1;
  double l2_lambda = 0.03;
  OptimizerKind optimizer = OptimizerKind::kAdaGrad;
  std::uint64_t seed = 0;
};

// Throws ArgumentError on batch_size/neg_ratio of 0, learning_rate <= 0 or
// l2_lambda < 0. epochs may be 0.
void validate(const TrainConfig& config);

struct LabeledTriple {
  Triple triple;
  int label = 1;  // +1 observed, -1 corrupted
};

// Each positive followed by neg_ratio corruptions of its head or tail (fair
// coin) by a uniform entity. A draw equal to the replaced entity is retried a
// few times and then kept.
std::vector<LabeledTriple> negative_batch(std::span<const Triple> positives,
                                          std::size_t neg_ratio,
                                          std::size_t num_entities, Rng& rng);

inline constexpr int kCorruptionRetries = 10;
inline constexpr double kProbabilityClamp = 1e-12;

enum class Param : std::size_t {
  kEntityHead = 0,
  kEntityTail,
  kRelationFwd,
  kRelationBwd,
  kDeltaFwd,
  kDeltaBwd,
};
inline constexpr std::size_t kNumParams = 6;

Matrix& param_matrix(EmbeddingModel& model, Param p);
const Matrix& param_matrix(const EmbeddingModel& model, Param p);

// Sparse gradient accumulator shaped like a model's parameters. Only rows
// touched since the last clear() are non-zero.
class Gradients {
 public:
  explicit Gradients(const EmbeddingModel& model);

  std::span<double> row(Param p, std::size_t r);
  std::span<const std::size_t> touched(Param p) const {
    return touched_[static_cast<std::size_t>(p)];
  }
  const Matrix& matrix(Param p) const {
    return grads_[static_cast<std::size_t>(p)];
  }
  void clear();

 private:
  std::array<Matrix, kNumParams> grads_;
  std::array<std::vector<std::size_t>, kNumParams> touched_;
  std::array<std::vector<char>, kNumParams> is_touched_;
};

// Regularised negative log-likelihood of the batch:
//   -sum_{+} log mu - sum_{-} log(1 - mu) + l2 * sum ||touched raw rows||^2
// with mu clamped to [1e-12, 1 - 1e-12]. Each raw row the batch touches,
// including tie-chain relation rows and delta rows, is counted once. When
// grads is non-null the gradient is accumulated into it.
double batch_loss(const EmbeddingModel& model,
                  std::span<const LabeledTriple> batch, double l2_lambda,
                  Gradients* grads = nullptr);

class Optimizer {
 public:
  Optimizer(const EmbeddingModel& model, OptimizerKind kind,
            double learning_rate);

  // Applies and then clears the gradient.
  void step(EmbeddingModel& model, Gradients& grads);

 private:
  OptimizerKind kind_;
  double learning_rate_;
  std::array<Matrix, kNumParams> accum_;
};

inline constexpr double kAdaGradFloor = 1e-8;

struct EpochLoss {
  std::size_t epoch = 0;
  double loss = 0.0;  // mean over labeled examples
};

struct LossTrace {
  std::vector<EpochLoss> epochs;
};

void write_loss_csv(std::ostream& out, const LossTrace& trace,
                    bool header = true);

using EpochCallback = std::function<void(const EpochLoss&, const EmbeddingModel&)>;

// Mini-batch training on `triples`. Each batch uses l2_lambda divided by the
// number of batches per epoch. Throws NumericError naming the epoch and
// batch if the loss becomes non-finite.
LossTrace train(EmbeddingModel& model, std::span<const Triple> triples,
                const TrainConfig& config, const EpochCallback& on_epoch = {});

// Same, on the store's training split; the model must match its sizes.
LossTrace train(EmbeddingModel& model, const TripleStore& store,
                const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace kgsub

#endif  // KGSUB_TRAINING_H_
