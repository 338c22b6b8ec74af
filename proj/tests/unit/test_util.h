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

#ifndef KGSUB_TESTS_UNIT_TEST_UTIL_H_
#define KGSUB_TESTS_UNIT_TEST_UTIL_H_

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kgsub/kg_data.h"
#include "kgsub/models.h"
#include "kgsub/rng.h"

namespace kgsub::testing {

inline std::filesystem::path data_dir() { return KGSUB_DATA_DIR; }

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kgsub_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Loads a committed fixture directory (train, test, optional valid, rules).
inline Dataset load_fixture(const std::string& name) {
  const auto dir = data_dir() / name;
  DatasetPaths paths{dir / "train.tsv", std::nullopt, dir / "test.tsv",
                     std::nullopt};
  if (std::filesystem::exists(dir / "valid.tsv")) paths.valid = dir / "valid.tsv";
  if (std::filesystem::exists(dir / "rules.tsv")) paths.rules = dir / "rules.tsv";
  return load_dataset(paths);
}

inline std::vector<Triple> parse(const std::string& text, Vocabulary& vocab) {
  std::istringstream in(text);
  return parse_triple_file(in, vocab);
}

// Random distinct triples over the given id ranges.
inline std::vector<Triple> random_triples(std::size_t count,
                                          std::size_t num_entities,
                                          std::size_t num_relations, Rng& rng) {
  std::uniform_int_distribution<EntityId> ent(
      0, static_cast<EntityId>(num_entities) - 1);
  std::uniform_int_distribution<RelationId> rel(
      0, static_cast<RelationId>(num_relations) - 1);
  TripleSet seen;
  std::vector<Triple> out;
  for (std::size_t guard = 0; out.size() < count && guard < 100 * count;
       ++guard) {
    const Triple t{ent(rng), rel(rng), ent(rng)};
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

// Model with every raw parameter drawn from N(0, scale^2).
inline EmbeddingModel random_model(ModelKind kind, std::size_t dim,
                                   std::size_t num_entities,
                                   std::size_t num_relations,
                                   std::uint64_t seed,
                                   Nonlinearity phi = Nonlinearity::kReLU,
                                   ConstraintGraph graph = {},
                                   double scale = 1.0) {
  EmbeddingModel m = make_model(
      ModelConfig{kind, dim, phi, num_entities, num_relations},
      std::move(graph));
  Rng rng = make_stream(seed, "test-model");
  std::normal_distribution<double> normal(0.0, scale);
  for (Matrix* mat : {&m.entity_head, &m.entity_tail, &m.relation_fwd,
                      &m.relation_bwd, &m.delta_fwd, &m.delta_bwd}) {
    for (double& v : mat->values()) v = normal(rng);
  }
  return m;
}

}  // namespace kgsub::testing

#endif  // KGSUB_TESTS_UNIT_TEST_UTIL_H_
