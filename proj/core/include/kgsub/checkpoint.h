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

#ifndef KGSUB_CHECKPOINT_H_
#define KGSUB_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "kgsub/kg_data.h"
#include "kgsub/models.h"

namespace kgsub {

// A trained model together with the vocabulary it was trained on. Layouts
// are described in docs/checkpoint_format.md.
struct Checkpoint {
  EmbeddingModel model;
  Vocabulary vocab;
  // Rules known at training time. They are enforced only when
  // model.constraints is non-empty.
  std::vector<SubsumptionRule> rules;
};

enum class CheckpointFormat { kText, kBinary };

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt,
                      CheckpointFormat format);
// Detects the format from the leading magic.
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt,
                     CheckpointFormat format = CheckpointFormat::kText);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace kgsub

#endif  // KGSUB_CHECKPOINT_H_
