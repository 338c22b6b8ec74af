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

#include "kgsub/kg_data.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "kgsub/error.h"
#include "kgsub/rng.h"

namespace kgsub {
namespace {

template <typename Map>
std::int32_t intern(std::string_view name, std::vector<std::string>& names,
                    Map& ids) {
  if (auto it = ids.find(name); it != ids.end()) return it->second;
  const auto id = static_cast<std::int32_t>(names.size());
  names.emplace_back(name);
  ids.emplace(names.back(), id);
  return id;
}

// Splits on tabs; fields may not be empty. Returns false on wrong arity.
bool split_fields(std::string_view line, std::array<std::string_view, 3>& out) {
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    const std::string_view field = line.substr(
        start, tab == std::string_view::npos ? std::string_view::npos
                                             : tab - start);
    if (count == 3) return false;
    out[count++] = field;
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return count == 3;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::vector<Triple> dedupe(std::vector<Triple> triples) {
  TripleSet seen;
  std::vector<Triple> out;
  out.reserve(triples.size());
  for (const Triple& t : triples) {
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

}  // namespace

EntityId Vocabulary::intern_entity(std::string_view name) {
  return intern(name, entities_, entity_ids_);
}

RelationId Vocabulary::intern_relation(std::string_view name) {
  return intern(name, relations_, relation_ids_);
}

std::optional<EntityId> Vocabulary::find_entity(std::string_view name) const {
  if (auto it = entity_ids_.find(name); it != entity_ids_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::optional<RelationId> Vocabulary::find_relation(
    std::string_view name) const {
  if (auto it = relation_ids_.find(name); it != relation_ids_.end()) {
    return it->second;
  }
  return std::nullopt;
}

const std::string& Vocabulary::entity_name(EntityId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= entities_.size()) {
    throw ArgumentError("entity id out of range: " + std::to_string(id));
  }
  return entities_[static_cast<std::size_t>(id)];
}

const std::string& Vocabulary::relation_name(RelationId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= relations_.size()) {
    throw ArgumentError("relation id out of range: " + std::to_string(id));
  }
  return relations_[static_cast<std::size_t>(id)];
}

Triple apply_rule(const SubsumptionRule& rule, const Triple& t) {
  if (rule.direction == RuleDirection::kDirect) {
    return {t.head, rule.conclusion, t.tail};
  }
  return {t.tail, rule.conclusion, t.head};
}

KnownIndex::KnownIndex(std::size_t num_entities, std::size_t num_relations,
                       std::span<const std::span<const Triple>> splits)
    : num_entities_(num_entities), num_relations_(num_relations) {
  for (const auto& split : splits) {
    for (const Triple& t : split) {
      if (!members_.insert(key(t)).second) continue;
      const auto h = static_cast<std::uint64_t>(t.head);
      const auto r = static_cast<std::uint64_t>(t.relation);
      const auto tl = static_cast<std::uint64_t>(t.tail);
      tails_[h * num_relations_ + r].push_back(t.tail);
      heads_[tl * num_relations_ + r].push_back(t.head);
    }
  }
}

std::uint64_t KnownIndex::key(const Triple& t) const {
  return (static_cast<std::uint64_t>(t.head) * num_relations_ +
          static_cast<std::uint64_t>(t.relation)) *
             num_entities_ +
         static_cast<std::uint64_t>(t.tail);
}

std::span<const EntityId> KnownIndex::tails(EntityId head,
                                            RelationId relation) const {
  const auto it = tails_.find(static_cast<std::uint64_t>(head) * num_relations_ +
                              static_cast<std::uint64_t>(relation));
  if (it == tails_.end()) return {};
  return it->second;
}

std::span<const EntityId> KnownIndex::heads(RelationId relation,
                                            EntityId tail) const {
  const auto it = heads_.find(static_cast<std::uint64_t>(tail) * num_relations_ +
                              static_cast<std::uint64_t>(relation));
  if (it == heads_.end()) return {};
  return it->second;
}

TripleStore::TripleStore(std::size_t num_entities, std::size_t num_relations,
                         std::vector<Triple> train, std::vector<Triple> valid,
                         std::vector<Triple> test)
    : num_entities_(num_entities),
      num_relations_(num_relations),
      train_(dedupe(std::move(train))),
      valid_(dedupe(std::move(valid))),
      test_(dedupe(std::move(test))) {
  for (const auto* split : {&train_, &valid_, &test_}) {
    for (const Triple& t : *split) {
      if (t.head < 0 || t.tail < 0 || t.relation < 0 ||
          static_cast<std::size_t>(t.head) >= num_entities ||
          static_cast<std::size_t>(t.tail) >= num_entities ||
          static_cast<std::size_t>(t.relation) >= num_relations) {
        throw ArgumentError("triple id outside the vocabulary");
      }
    }
  }
  const std::array<std::span<const Triple>, 3> splits{train_, valid_, test_};
  known_ = std::make_shared<const KnownIndex>(num_entities, num_relations,
                                              splits);
}

TripleStore TripleStore::with_train(std::vector<Triple> train) const {
  TripleStore out;
  out.num_entities_ = num_entities_;
  out.num_relations_ = num_relations_;
  out.train_ = dedupe(std::move(train));
  out.valid_ = valid_;
  out.test_ = test_;
  out.known_ = known_;
  return out;
}

std::vector<Triple> parse_triple_file(std::istream& in, Vocabulary& vocab,
                                      VocabMode mode) {
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  std::array<std::string_view, 3> fields;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = strip_cr(line);
    if (view.empty()) continue;
    if (!split_fields(view, fields)) {
      throw ParseError("expected 3 tab-separated fields", line_no);
    }
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError("empty field", line_no);
    }
    if (mode == VocabMode::kExtend) {
      // Interning order follows the line: head, relation, tail.
      const EntityId h = vocab.intern_entity(fields[0]);
      const RelationId r = vocab.intern_relation(fields[1]);
      const EntityId t = vocab.intern_entity(fields[2]);
      triples.push_back({h, r, t});
      continue;
    }
    const auto h = vocab.find_entity(fields[0]);
    if (!h) throw VocabError("unknown entity '" + std::string(fields[0]) + "'");
    const auto r = vocab.find_relation(fields[1]);
    if (!r) {
      throw VocabError("unknown relation '" + std::string(fields[1]) + "'");
    }
    const auto t = vocab.find_entity(fields[2]);
    if (!t) throw VocabError("unknown entity '" + std::string(fields[2]) + "'");
    triples.push_back({*h, *r, *t});
  }
  return triples;
}

std::vector<SubsumptionRule> parse_rule_file(std::istream& in,
                                             const Vocabulary& vocab) {
  std::vector<SubsumptionRule> rules;
  std::string line;
  std::size_t line_no = 0;
  std::array<std::string_view, 3> fields;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = strip_cr(line);
    if (view.empty()) continue;
    if (!split_fields(view, fields)) {
      throw ParseError("expected 3 tab-separated fields", line_no);
    }
    SubsumptionRule rule;
    if (fields[1] == "direct") {
      rule.direction = RuleDirection::kDirect;
    } else if (fields[1] == "inverse") {
      rule.direction = RuleDirection::kInverse;
    } else {
      throw ParseError("bad direction '" + std::string(fields[1]) +
                           "' (want direct|inverse)",
                       line_no);
    }
    const auto premise = vocab.find_relation(fields[0]);
    if (!premise) {
      throw ParseError("unknown relation '" + std::string(fields[0]) + "'",
                       line_no);
    }
    const auto conclusion = vocab.find_relation(fields[2]);
    if (!conclusion) {
      throw ParseError("unknown relation '" + std::string(fields[2]) + "'",
                       line_no);
    }
    rule.premise = *premise;
    rule.conclusion = *conclusion;
    if (rule.direction == RuleDirection::kDirect &&
        rule.premise == rule.conclusion) {
      throw ParseError("rule subsumes a relation by itself", line_no);
    }
    if (std::find(rules.begin(), rules.end(), rule) != rules.end()) {
      throw ParseError("duplicate rule", line_no);
    }
    rules.push_back(rule);
  }
  return rules;
}

void write_triples(std::ostream& out, std::span<const Triple> triples,
                   const Vocabulary& vocab) {
  for (const Triple& t : triples) {
    out << vocab.entity_name(t.head) << '\t'
        << vocab.relation_name(t.relation) << '\t'
        << vocab.entity_name(t.tail) << '\n';
  }
}

void write_rules(std::ostream& out, std::span<const SubsumptionRule> rules,
                 const Vocabulary& vocab) {
  for (const auto& rule : rules) {
    out << vocab.relation_name(rule.premise) << '\t'
        << (rule.direction == RuleDirection::kDirect ? "direct" : "inverse")
        << '\t' << vocab.relation_name(rule.conclusion) << '\n';
  }
}

TripleStore subsample_train(const TripleStore& store, double fraction,
                            std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ArgumentError("fraction must lie in (0, 1], got " +
                        std::to_string(fraction));
  }
  const auto train = store.train();
  const auto want = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(train.size())));
  std::vector<Triple> sample;
  sample.reserve(want);
  Rng rng = make_stream(seed, stream::kSubsample);
  std::sample(train.begin(), train.end(), std::back_inserter(sample), want,
              rng);
  return store.with_train(std::move(sample));
}

std::vector<Triple> read_triple_file(const std::filesystem::path& path,
                                     Vocabulary& vocab, VocabMode mode) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_triple_file(in, vocab, mode);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_triple_file(const std::filesystem::path& path,
                       std::span<const Triple> triples,
                       const Vocabulary& vocab) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_triples(out, triples, vocab);
}

Dataset load_dataset(const DatasetPaths& paths) {
  Vocabulary vocab;
  auto train = read_triple_file(paths.train, vocab);
  std::vector<Triple> valid;
  std::vector<Triple> test;
  if (paths.valid) valid = read_triple_file(*paths.valid, vocab);
  if (paths.test) test = read_triple_file(*paths.test, vocab);
  std::vector<SubsumptionRule> rules;
  if (paths.rules) {
    std::ifstream in(*paths.rules);
    if (!in) throw IoError("cannot open " + paths.rules->string());
    try {
      rules = parse_rule_file(in, vocab);
    } catch (const ParseError& e) {
      throw ParseError(paths.rules->string() + ": " + e.what());
    }
  }
  TripleStore store(vocab.num_entities(), vocab.num_relations(),
                    std::move(train), std::move(valid), std::move(test));
  return Dataset{std::move(vocab), std::move(store), std::move(rules)};
}

DatasetStats stats(const Dataset& dataset) {
  return DatasetStats{dataset.vocab.num_entities(),
                      dataset.vocab.num_relations(),
                      dataset.store.train().size(),
                      dataset.store.valid().size(),
                      dataset.store.test().size()};
}

}  // namespace kgsub
