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

#ifndef KGSUB_KG_DATA_H_
#define KGSUB_KG_DATA_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kgsub {

using EntityId = std::int32_t;
using RelationId = std::int32_t;

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(t.head);
    h = h * 0x9e3779b97f4a7c15ull ^ static_cast<std::uint32_t>(t.relation);
    h = h * 0x9e3779b97f4a7c15ull ^ static_cast<std::uint32_t>(t.tail);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

using TripleSet = std::unordered_set<Triple, TripleHash>;

// Bidirectional name <-> dense id maps for entities and relations. Ids are
// handed out in first-appearance order.
class Vocabulary {
 public:
  EntityId intern_entity(std::string_view name);
  RelationId intern_relation(std::string_view name);

  std::optional<EntityId> find_entity(std::string_view name) const;
  std::optional<RelationId> find_relation(std::string_view name) const;

  const std::string& entity_name(EntityId id) const;
  const std::string& relation_name(RelationId id) const;

  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_relations() const { return relations_.size(); }

  const std::vector<std::string>& entity_names() const { return entities_; }
  const std::vector<std::string>& relation_names() const { return relations_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.entities_ == b.entities_ && a.relations_ == b.relations_;
  }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  using IdMap =
      std::unordered_map<std::string, std::int32_t, StringHash, std::equal_to<>>;

  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
  IdMap entity_ids_;
  IdMap relation_ids_;
};

enum class RuleDirection { kDirect, kInverse };

// kDirect:  (x, premise, y) -> (x, conclusion, y)
// kInverse: (x, premise, y) -> (y, conclusion, x)
struct SubsumptionRule {
  RelationId premise = 0;
  RelationId conclusion = 0;
  RuleDirection direction = RuleDirection::kDirect;

  friend bool operator==(const SubsumptionRule&,
                         const SubsumptionRule&) = default;
};

// Applies a rule to a triple whose relation is the rule's premise.
Triple apply_rule(const SubsumptionRule& rule, const Triple& premise_triple);

// Membership index over a set of triples, with per-(head, relation) and
// per-(relation, tail) neighbour lists for filtered ranking.
class KnownIndex {
 public:
  KnownIndex(std::size_t num_entities, std::size_t num_relations,
             std::span<const std::span<const Triple>> splits);

  bool contains(const Triple& t) const { return members_.contains(key(t)); }
  std::size_t size() const { return members_.size(); }

  // Tails t with (head, relation, t) known; empty if none.
  std::span<const EntityId> tails(EntityId head, RelationId relation) const;
  // Heads h with (h, relation, tail) known; empty if none.
  std::span<const EntityId> heads(RelationId relation, EntityId tail) const;

 private:
  std::uint64_t key(const Triple& t) const;

  std::uint64_t num_entities_;
  std::uint64_t num_relations_;
  std::unordered_set<std::uint64_t> members_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> tails_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> heads_;
};

// Id-encoded splits plus a membership index over their union. Immutable once
// built; the index is shared between stores derived from the same data.
class TripleStore {
 public:
  TripleStore(std::size_t num_entities, std::size_t num_relations,
              std::vector<Triple> train, std::vector<Triple> valid,
              std::vector<Triple> test);

  std::span<const Triple> train() const { return train_; }
  std::span<const Triple> valid() const { return valid_; }
  std::span<const Triple> test() const { return test_; }
  const KnownIndex& known() const { return *known_; }

  std::size_t num_entities() const { return num_entities_; }
  std::size_t num_relations() const { return num_relations_; }

  // Same valid/test and membership index, different training list.
  TripleStore with_train(std::vector<Triple> train) const;

 private:
  TripleStore() = default;

  std::size_t num_entities_ = 0;
  std::size_t num_relations_ = 0;
  std::vector<Triple> train_;
  std::vector<Triple> valid_;
  std::vector<Triple> test_;
  std::shared_ptr<const KnownIndex> known_;
};

enum class VocabMode {
  kExtend,  // unseen names get fresh ids
  kFrozen,  // unseen names are a VocabError
};

// One `head<TAB>relation<TAB>tail` triple per non-empty line.
std::vector<Triple> parse_triple_file(std::istream& in, Vocabulary& vocab,
                                      VocabMode mode = VocabMode::kExtend);

// One `premise<TAB>direct|inverse<TAB>conclusion` rule per non-empty line.
// Relations must already be in the vocabulary.
std::vector<SubsumptionRule> parse_rule_file(std::istream& in,
                                             const Vocabulary& vocab);

void write_triples(std::ostream& out, std::span<const Triple> triples,
                   const Vocabulary& vocab);
void write_rules(std::ostream& out, std::span<const SubsumptionRule> rules,
                 const Vocabulary& vocab);

// Uniform sample of ceil(fraction * |train|) training triples without
// replacement, kept in file order. Valid, test and the membership index are
// untouched, so filtered evaluation still sees the full data.
TripleStore subsample_train(const TripleStore& store, double fraction,
                            std::uint64_t seed);

struct DatasetPaths {
  std::filesystem::path train;
  std::optional<std::filesystem::path> valid;
  std::optional<std::filesystem::path> test;
  std::optional<std::filesystem::path> rules;
};

struct Dataset {
  Vocabulary vocab;
  TripleStore store;
  std::vector<SubsumptionRule> rules;
};

// Loads train, valid, test in that order (vocabulary ids follow that order),
// then the rule file.
Dataset load_dataset(const DatasetPaths& paths);

struct DatasetStats {
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;
};

DatasetStats stats(const Dataset& dataset);

std::vector<Triple> read_triple_file(const std::filesystem::path& path,
                                     Vocabulary& vocab,
                                     VocabMode mode = VocabMode::kExtend);
void write_triple_file(const std::filesystem::path& path,
                       std::span<const Triple> triples,
                       const Vocabulary& vocab);

}  // namespace kgsub

#endif  // KGSUB_KG_DATA_H_
