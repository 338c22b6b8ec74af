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

#include "kgsub/synthetic.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "kgsub/error.h"
#include "kgsub/rng.h"

namespace kgsub::synthetic {
namespace {

// The rule-closed facts of one latent link, each observed with its own
// probability. A required group always contributes at least one fact, which
// keeps every entity in the vocabulary.
struct Group {
  std::vector<NamedTriple> facts;
  std::vector<double> observe;
  bool required = true;
};

std::vector<NamedTriple> observe_groups(const std::vector<Group>& groups,
                                        std::size_t target, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<char>> seen(groups.size());
  std::size_t total = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Group& group = groups[g];
    seen[g].assign(group.facts.size(), 0);
    std::size_t count = 0;
    for (std::size_t f = 0; f < group.facts.size(); ++f) {
      if (unit(rng) < group.observe[f]) {
        seen[g][f] = 1;
        ++count;
      }
    }
    if (count == 0 && group.required) {
      std::discrete_distribution<std::size_t> pick(group.observe.begin(),
                                                   group.observe.end());
      seen[g][pick(rng)] = 1;
      count = 1;
    }
    total += count;
  }

  // Trim or pad to the exact size, never emptying a group.
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  if (total < target) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t f = 0; f < groups[g].facts.size(); ++f) {
        if (!seen[g][f]) candidates.emplace_back(g, f);
      }
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    for (const auto& [g, f] : candidates) {
      if (total == target) break;
      seen[g][f] = 1;
      ++total;
    }
  } else if (total > target) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t f = 0; f < groups[g].facts.size(); ++f) {
        if (seen[g][f]) candidates.emplace_back(g, f);
      }
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    for (const auto& [g, f] : candidates) {
      if (total == target) break;
      const auto in_group = static_cast<std::size_t>(
          std::count(seen[g].begin(), seen[g].end(), 1));
      if (in_group < 2) continue;
      seen[g][f] = 0;
      --total;
    }
  }
  if (total != target) {
    throw ArgumentError(fmt::format(
        "generator cannot reach {} facts (have {})", target, total));
  }

  std::vector<NamedTriple> out;
  out.reserve(total);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t f = 0; f < groups[g].facts.size(); ++f) {
      if (seen[g][f]) out.push_back(groups[g].facts[f]);
    }
  }
  return out;
}

void split(std::vector<NamedTriple> facts, std::size_t num_valid,
           std::size_t num_test, Rng& rng, GeneratedDataset& out) {
  std::shuffle(facts.begin(), facts.end(), rng);
  out.test.assign(facts.begin(), facts.begin() + num_test);
  out.valid.assign(facts.begin() + num_test,
                   facts.begin() + num_test + num_valid);
  out.train.assign(facts.begin() + num_test + num_valid, facts.end());
}

// Index in [0, n) with probability decaying like (i + 1)^-exponent.
class SkewedPicker {
 public:
  SkewedPicker(std::size_t n, double exponent) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = std::pow(static_cast<double>(i + 1), -exponent);
    }
    dist_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
  }
  std::size_t operator()(Rng& rng) { return dist_(rng); }

 private:
  std::discrete_distribution<std::size_t> dist_;
};

// Assigns each of `members` items to one of `owners` slots so every owner
// gets at least one member, the rest following a skewed popularity.
std::vector<std::size_t> assign_members(std::size_t members, std::size_t owners,
                                        double skew, Rng& rng) {
  if (members < owners) throw ArgumentError("fewer members than owners");
  std::vector<std::size_t> owner(members);
  std::vector<std::size_t> order(members);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  SkewedPicker pick(owners, skew);
  for (std::size_t i = 0; i < members; ++i) {
    owner[order[i]] = i < owners ? i : pick(rng);
  }
  return owner;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sport

GeneratedDataset generate_sport(std::uint64_t seed) {
  constexpr std::size_t kTeams = 200;
  constexpr std::size_t kAthletes = 600;
  constexpr std::size_t kCoaches = 150;
  constexpr std::size_t kStaff = 89;
  constexpr double kLeaderShare = 0.2;
  constexpr double kSecondTeamShare = 0.45;
  constexpr std::size_t kTrain = 1312;
  constexpr std::size_t kTest = 307;

  const std::string led = "AthleteLedSportsTeam";
  const std::string plays = "AthletePlaysForTeam";
  const std::string coaches = "CoachesTeam";
  const std::string hired = "OrganizationHiredPerson";
  const std::string belongs = "PersonBelongsToOrganization";

  Rng rng = make_stream(seed, "sport");
  const std::size_t persons = kAthletes + kCoaches + kStaff;
  const auto team_of = assign_members(persons, kTeams, 0.7, rng);
  auto team = [](std::size_t i) { return fmt::format("concept_sportsteam_{:03}", i); };

  std::vector<Group> groups;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t p = 0; p < persons; ++p) {
    const std::string t = team(team_of[p]);
    if (p < kAthletes) {
      const std::string a = fmt::format("concept_athlete_{:03}", p);
      const bool leader = unit(rng) < kLeaderShare;
      Group g;
      if (leader) {
        g.facts.push_back({a, led, t});
        g.observe.push_back(0.8);
      }
      g.facts.push_back({a, plays, t});
      g.observe.push_back(0.85);
      g.facts.push_back({a, belongs, t});
      g.observe.push_back(0.25);
      g.facts.push_back({t, hired, a});
      g.observe.push_back(0.25);
      groups.push_back(std::move(g));
      if (unit(rng) < kSecondTeamShare) {
        std::size_t other = std::uniform_int_distribution<std::size_t>(
            0, kTeams - 1)(rng);
        if (other == team_of[p]) other = (other + 1) % kTeams;
        const std::string t2 = team(other);
        groups.push_back(Group{{{a, plays, t2}, {a, belongs, t2}, {t2, hired, a}},
                               {0.85, 0.25, 0.25},
                               false});
      }
    } else if (p < kAthletes + kCoaches) {
      const std::string c = fmt::format("concept_coach_{:03}", p - kAthletes);
      groups.push_back(Group{{{c, coaches, t}, {c, belongs, t}, {t, hired, c}},
                             {0.85, 0.25, 0.25},
                             true});
    } else {
      const std::string s =
          fmt::format("concept_person_{:03}", p - kAthletes - kCoaches);
      groups.push_back(
          Group{{{s, belongs, t}, {t, hired, s}}, {0.6, 0.5}, true});
    }
  }

  GeneratedDataset out;
  split(observe_groups(groups, kTrain + kTest, rng), 0, kTest, rng, out);
  out.rules = {{led, "direct", plays},
               {plays, "direct", belongs},
               {coaches, "direct", belongs},
               {hired, "inverse", belongs},
               {belongs, "inverse", hired}};
  return out;
}

// ---------------------------------------------------------------------------
// Location

GeneratedDataset generate_location(std::uint64_t seed) {
  constexpr std::size_t kCountries = 100;
  constexpr std::size_t kStates = 95;
  constexpr std::size_t kOtherCities = 445 - 2 * kCountries - 2 * kStates;
  constexpr double kOtherCityInState = 0.5;
  constexpr std::size_t kTrain = 384;
  constexpr std::size_t kTest = 100;

  const std::string capital_of = "CapitalCityOfCountry";
  const std::string city_country = "CityLocatedInCountry";
  const std::string city_state = "CityLocatedInState";
  const std::string has_capital = "StateHasCapital";
  const std::string state_country = "StateLocatedInCountry";

  Rng rng = make_stream(seed, "location");
  auto country = [](std::size_t i) { return fmt::format("concept_country_{:03}", i); };
  auto state = [](std::size_t i) { return fmt::format("concept_stateorprovince_{:03}", i); };

  // States cluster in a few countries.
  SkewedPicker state_home(kCountries, 1.5);
  std::vector<std::size_t> country_of_state(kStates);
  for (auto& c : country_of_state) c = state_home(rng);

  std::vector<Group> groups;
  for (std::size_t k = 0; k < kCountries; ++k) {
    const std::string x = fmt::format("concept_city_capital_{:03}", k);
    groups.push_back(Group{{{x, capital_of, country(k)},
                            {x, city_country, country(k)}},
                           {0.95, 0.9},
                           true});
  }
  for (std::size_t s = 0; s < kStates; ++s) {
    const std::string y = fmt::format("concept_city_statecapital_{:03}", s);
    const std::string k = country(country_of_state[s]);
    groups.push_back(Group{{{state(s), has_capital, y}, {y, city_state, state(s)}},
                           {0.95, 0.9},
                           true});
    groups.push_back(Group{{{y, city_country, k}}, {0.15}, false});
    groups.push_back(Group{{{state(s), state_country, k}}, {0.3}, false});
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SkewedPicker city_home(kCountries, 0.8);
  std::uniform_int_distribution<std::size_t> any_state(0, kStates - 1);
  for (std::size_t i = 0; i < kOtherCities; ++i) {
    const std::string z = fmt::format("concept_city_{:03}", i);
    if (unit(rng) < kOtherCityInState) {
      const std::size_t s = any_state(rng);
      const std::string k = country(country_of_state[s]);
      groups.push_back(Group{{{z, city_state, state(s)}}, {1.0}, true});
      groups.push_back(Group{{{z, city_country, k}}, {0.2}, false});
    } else {
      groups.push_back(
          Group{{{z, city_country, country(city_home(rng))}}, {1.0}, true});
    }
  }

  GeneratedDataset out;
  split(observe_groups(groups, kTrain + kTest, rng), 0, kTest, rng, out);
  out.rules = {{capital_of, "direct", city_country},
               {has_capital, "inverse", city_state}};
  return out;
}

// ---------------------------------------------------------------------------
// WN18

GeneratedDataset generate_wn18(std::uint64_t seed, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw ArgumentError("scale must lie in (0, 1]");
  }
  auto scaled = [&](double n) {
    return static_cast<std::size_t>(std::llround(n * scale));
  };
  const std::size_t num_entities = scaled(40943);
  const std::size_t num_valid = scaled(5000);
  const std::size_t num_test = scaled(5000);
  const std::size_t total_facts = 2 * scaled(151442 / 2);

  struct Family {
    std::string forward;
    std::string backward;  // same as forward for symmetric relations
    std::size_t edges;
  };
  // Edge counts follow the relation mix of the WordNet benchmark.
  std::vector<Family> families = {
      {"_hypernym", "_hyponym", scaled(37250)},
      {"_member_meronym", "_member_holonym", scaled(7915)},
      {"_has_part", "_part_of", scaled(5150)},
      {"_instance_hypernym", "_instance_hyponym", scaled(3135)},
      {"_synset_domain_topic_of", "_member_of_domain_topic", scaled(3335)},
      {"_synset_domain_usage_of", "_member_of_domain_usage", scaled(695)},
      {"_synset_domain_region_of", "_member_of_domain_region", scaled(965)},
      {"_also_see", "_also_see", scaled(695)},
      {"_verb_group", "_verb_group", scaled(610)},
      {"_similar_to", "_similar_to", scaled(45)},
      {"_derivationally_related_form", "_derivationally_related_form", 0},
  };
  std::size_t fixed = 0;
  for (const auto& f : families) fixed += f.edges;
  families.back().edges = total_facts / 2 - fixed;

  Rng rng = make_stream(seed, "wn18");
  // Entity layout: [tree nodes | instances | satellites (adjective-like)].
  const std::size_t num_instances = families[3].edges;
  const std::size_t num_tree = families[0].edges + scaled(120);
  if (num_tree + num_instances >= num_entities) {
    throw ArgumentError("wn18 generator: inconsistent sizes");
  }
  const std::size_t num_satellites = num_entities - num_tree - num_instances;
  const std::size_t num_roots = num_tree - families[0].edges;

  std::vector<std::size_t> offsets(num_entities);
  {
    std::set<std::size_t> used;
    std::uniform_int_distribution<std::size_t> offset(1000000, 15299999);
    for (auto& o : offsets) {
      do {
        o = offset(rng);
      } while (!used.insert(o).second);
    }
  }
  auto name = [&](std::size_t e) { return fmt::format("{:08}", offsets[e]); };

  std::set<std::pair<std::size_t, std::size_t>> used_pairs;
  std::vector<NamedTriple> facts;
  facts.reserve(total_facts);
  auto emit = [&](const Family& fam, std::size_t a, std::size_t b) {
    std::pair<std::size_t, std::size_t> key(a, b);
    if (fam.forward == fam.backward && b < a) key = {b, a};
    if (a == b || !used_pairs.insert(key).second) return false;
    facts.push_back({name(a), fam.forward, name(b)});
    facts.push_back({name(b), fam.backward, name(a)});
    return true;
  };
  // A fresh pair set per family: different relations may share entity pairs.
  auto next_family = [&] { used_pairs.clear(); };

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Parents skew towards early (general) nodes.
  std::vector<std::size_t> parent(num_tree, 0);
  for (std::size_t i = num_roots; i < num_tree; ++i) {
    const double u = unit(rng);
    parent[i] = static_cast<std::size_t>(u * u * static_cast<double>(i));
    emit(families[0], i, parent[i]);
  }
  next_family();

  // Nodes near each other in the tree: a sibling or a cousin.
  std::uniform_int_distribution<std::size_t> any_tree(num_roots, num_tree - 1);
  auto nearby = [&](std::size_t x) {
    std::size_t up = parent[x];
    if (up >= num_roots && unit(rng) < 0.5) up = parent[up];
    // Random descendant walk is expensive; pick a random later node whose
    // parent is `up` by rejection, falling back to any tree node.
    for (int attempt = 0; attempt < 64; ++attempt) {
      const std::size_t y = any_tree(rng);
      if (parent[y] == up || (parent[y] >= num_roots && parent[parent[y]] == up)) {
        return y;
      }
    }
    return any_tree(rng);
  };
  auto fill_local = [&](const Family& fam) {
    std::size_t made = 0;
    while (made < fam.edges) {
      const std::size_t x = any_tree(rng);
      if (emit(fam, x, nearby(x))) ++made;
    }
    next_family();
  };
  fill_local(families[1]);
  fill_local(families[2]);

  // Instances hang off tree nodes.
  for (std::size_t i = 0; i < num_instances; ++i) {
    emit(families[3], num_tree + i, any_tree(rng));
  }
  next_family();

  // Domain relations point at a small set of topic nodes.
  for (std::size_t fam = 4; fam <= 6; ++fam) {
    const std::size_t topics = std::max<std::size_t>(4, families[fam].edges / 12);
    std::uniform_int_distribution<std::size_t> topic(0, topics - 1);
    std::size_t made = 0;
    while (made < families[fam].edges) {
      // Topics are spread over the tree with a stride.
      const std::size_t t = (topic(rng) * 7919) % num_tree;
      if (emit(families[fam], any_tree(rng), t)) ++made;
    }
    next_family();
  }

  // Symmetric relations among satellites, then derivational links which also
  // guarantee every satellite appears at least once.
  const std::size_t sat0 = num_tree + num_instances;
  std::uniform_int_distribution<std::size_t> any_sat(sat0,
                                                     num_entities - 1);
  for (std::size_t fam = 7; fam <= 9; ++fam) {
    std::size_t made = 0;
    while (made < families[fam].edges) {
      const std::size_t a = any_sat(rng);
      const std::size_t b = unit(rng) < 0.5 ? any_sat(rng) : any_tree(rng);
      if (emit(families[fam], a, b)) ++made;
    }
    next_family();
  }
  const Family& deriv = families.back();
  std::size_t made = 0;
  for (std::size_t s = sat0; s < num_entities && made < deriv.edges; ++s) {
    while (!emit(deriv, s, any_tree(rng))) {
    }
    ++made;
  }
  while (made < deriv.edges) {
    const std::size_t a = any_tree(rng);
    if (emit(deriv, a, nearby(a))) ++made;
  }
  (void)num_satellites;

  if (facts.size() != total_facts) {
    throw ArgumentError(fmt::format("wn18 generator produced {} facts, want {}",
                                    facts.size(), total_facts));
  }
  GeneratedDataset out;
  split(std::move(facts), num_valid, num_test, rng, out);
  return out;
}

void write_dataset(const GeneratedDataset& data,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& file,
                   const std::vector<NamedTriple>& rows) {
    std::ofstream out(dir / file);
    if (!out) throw IoError("cannot write " + (dir / file).string());
    for (const auto& r : rows) out << r[0] << '\t' << r[1] << '\t' << r[2] << '\n';
  };
  write("train.tsv", data.train);
  write("test.tsv", data.test);
  if (!data.valid.empty()) write("valid.tsv", data.valid);
  if (!data.rules.empty()) write("rules.tsv", data.rules);
}

}  // namespace kgsub::synthetic
