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

#include "kgsub/logic.h"

#include <deque>
#include <set>
#include <utility>

#include "kgsub/error.h"

namespace kgsub {
namespace {

std::unordered_map<RelationId, std::vector<std::size_t>> rules_by_premise(
    std::span<const SubsumptionRule> rules) {
  std::unordered_map<RelationId, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    index[rules[i].premise].push_back(i);
  }
  return index;
}

}  // namespace

ClosureResult forward_closure(std::span<const Triple> triples,
                              std::span<const SubsumptionRule> rules) {
  ClosureResult result;
  std::deque<Triple> pending;
  for (const Triple& t : triples) {
    if (result.members.insert(t).second) {
      result.derived.push_back(t);
      pending.push_back(t);
    }
  }
  const auto by_premise = rules_by_premise(rules);
  while (!pending.empty()) {
    const Triple t = pending.front();
    pending.pop_front();
    const auto it = by_premise.find(t.relation);
    if (it == by_premise.end()) continue;
    for (std::size_t rule : it->second) {
      const Triple next = apply_rule(rules[rule], t);
      if (!result.members.insert(next).second) continue;
      result.derived.push_back(next);
      result.provenance.emplace(next, Witness{t, rule});
      pending.push_back(next);
    }
  }
  return result;
}

double logical_hit1(std::span<const Triple> test,
                    const ClosureResult& closure) {
  if (test.empty()) throw ArgumentError("empty test set");
  std::size_t hits = 0;
  for (const Triple& t : test) {
    if (closure.contains(t)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

StripResult strip_redundant(std::span<const Triple> train,
                            std::span<const SubsumptionRule> rules) {
  // Every rule has a single premise atom, so a triple is derivable from a set
  // iff one of its ancestors (triples that derive it through a rule chain)
  // is in the set. Ancestors are found by running the rules backwards over
  // (relation, swapped) states.
  std::unordered_map<RelationId, std::vector<std::size_t>> by_conclusion;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    by_conclusion[rules[i].conclusion].push_back(i);
  }
  auto ancestors = [&](const Triple& t) {
    std::vector<Triple> out;
    std::set<std::pair<RelationId, bool>> seen{{t.relation, false}};
    std::vector<std::pair<RelationId, bool>> frontier{{t.relation, false}};
    while (!frontier.empty()) {
      const auto [rel, swapped] = frontier.back();
      frontier.pop_back();
      const auto it = by_conclusion.find(rel);
      if (it == by_conclusion.end()) continue;
      for (std::size_t i : it->second) {
        const auto& rule = rules[i];
        const bool s = swapped != (rule.direction == RuleDirection::kInverse);
        if (!seen.insert({rule.premise, s}).second) continue;
        frontier.push_back({rule.premise, s});
        out.push_back(s ? Triple{t.tail, rule.premise, t.head}
                        : Triple{t.head, rule.premise, t.tail});
      }
    }
    return out;
  };

  TripleSet retained;
  std::vector<Triple> unique;
  for (const Triple& t : train) {
    if (retained.insert(t).second) unique.push_back(t);
  }
  StripResult result;
  for (const Triple& t : unique) {
    bool redundant = false;
    for (const Triple& a : ancestors(t)) {
      if (a != t && retained.contains(a)) {
        redundant = true;
        break;
      }
    }
    if (redundant) {
      retained.erase(t);
      result.removed.push_back(t);
    } else {
      result.kept.push_back(t);
    }
  }
  return result;
}

}  // namespace kgsub
