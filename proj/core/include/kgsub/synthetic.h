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

#ifndef KGSUB_SYNTHETIC_H_
#define KGSUB_SYNTHETIC_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kgsub::synthetic {

using NamedTriple = std::array<std::string, 3>;  // head, relation, tail
using NamedRule = std::array<std::string, 3>;    // premise, direction, conclusion

// A generated benchmark in name space, ready to be written as TSV files.
struct GeneratedDataset {
  std::vector<NamedTriple> train;
  std::vector<NamedTriple> valid;
  std::vector<NamedTriple> test;
  std::vector<NamedRule> rules;
};

// Sport-shaped NELL world: persons (athletes, team leaders, coaches, staff)
// attached to teams. Every membership yields its rule-closed set of facts;
// each fact is observed independently and the observed set is split at
// random. 1,039 entities, 5 relations, 1,312 train / 307 test.
GeneratedDataset generate_sport(std::uint64_t seed);

// Location-shaped world: countries, states and cities, with country and
// state capitals. 445 entities, 5 relations, 384 train / 100 test.
GeneratedDataset generate_location(std::uint64_t seed);

// WordNet-shaped world with 18 relations, most of them in inverse pairs
// (hypernym/hyponym, part_of/has_part, ...) and a few symmetric ones. At
// scale 1: 40,943 entities, 141,442 train / 5,000 valid / 5,000 test.
GeneratedDataset generate_wn18(std::uint64_t seed, double scale = 1.0);

// Writes train.tsv, test.tsv, valid.tsv (if non-empty) and rules.tsv (if
// non-empty) into `dir`, creating it.
void write_dataset(const GeneratedDataset& data,
                   const std::filesystem::path& dir);

}  // namespace kgsub::synthetic

#endif  // KGSUB_SYNTHETIC_H_
