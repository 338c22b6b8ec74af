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

#ifndef KGSUB_LOGIC_H_
#define KGSUB_LOGIC_H_

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "kgsub/kg_data.h"

namespace kgsub {

// One derivation step that produced a triple.
struct Witness {
  Triple source;
  std::size_t rule = 0;  // index into the rule list
};

struct ClosureResult {
  // Input triples first (deduplicated, in order), then derived ones in the
  // order they were found.
  std::vector<Triple> derived;
  // Only triples not present in the input have a witness.
  std::unordered_map<Triple, Witness, TripleHash> provenance;

  bool contains(const Triple& t) const { return members.contains(t); }

  TripleSet members;
};

// Least fixpoint of the rules over the input.
ClosureResult forward_closure(std::span<const Triple> triples,
                              std::span<const SubsumptionRule> rules);

// Share of test triples present in the closure. Throws on an empty test set.
double logical_hit1(std::span<const Triple> test, const ClosureResult& closure);

struct StripResult {
  std::vector<Triple> kept;
  std::vector<Triple> removed;
};

// Greedy scan in input order: a triple is dropped when the triples still
// retained (other than itself) derive it. The closure of `kept` covers the
// input.
StripResult strip_redundant(std::span<const Triple> train,
                            std::span<const SubsumptionRule> rules);

}  // namespace kgsub

#endif  // KGSUB_LOGIC_H_
