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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "kgsub/synthetic.h"
#include "unit/test_util.h"

namespace kgsub {
namespace {

std::vector<synthetic::NamedTriple> read_named(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<synthetic::NamedTriple> out;
  std::string line;
  while (std::getline(in, line)) {
    synthetic::NamedTriple t;
    std::istringstream fields(line);
    std::getline(fields, t[0], '\t');
    std::getline(fields, t[1], '\t');
    std::getline(fields, t[2], '\t');
    out.push_back(t);
  }
  return out;
}

void expect_matches_fixture(const synthetic::GeneratedDataset& g,
                            const std::string& name) {
  const auto dir = testing::data_dir() / name;
  EXPECT_EQ(read_named(dir / "train.tsv"), g.train) << name;
  EXPECT_EQ(read_named(dir / "test.tsv"), g.test) << name;
  if (!g.valid.empty()) {
    EXPECT_EQ(read_named(dir / "valid.tsv"), g.valid);
  }
  if (!g.rules.empty()) {
    EXPECT_EQ(read_named(dir / "rules.tsv"), g.rules);
  }
}

TEST(Synthetic, CommittedFixturesMatchGenerator) {
  expect_matches_fixture(synthetic::generate_sport(0), "sport");
  expect_matches_fixture(synthetic::generate_location(0), "location");
  expect_matches_fixture(synthetic::generate_wn18(0, 0.1), "wn18-desk");
}

TEST(Synthetic, DeterministicPerSeed) {
  EXPECT_EQ(synthetic::generate_sport(3).train,
            synthetic::generate_sport(3).train);
  EXPECT_NE(synthetic::generate_sport(3).train,
            synthetic::generate_sport(4).train);
  EXPECT_EQ(synthetic::generate_location(5).test,
            synthetic::generate_location(5).test);
}

TEST(Synthetic, Wn18Scale) {
  const auto g = synthetic::generate_wn18(1, 0.1);
  EXPECT_EQ(g.train.size(), 14144u);
  EXPECT_EQ(g.valid.size(), 500u);
  EXPECT_EQ(g.test.size(), 500u);
  EXPECT_TRUE(g.rules.empty());
}

TEST(Synthetic, WriteDatasetRoundTrips) {
  const auto g = synthetic::generate_location(2);
  const auto dir = testing::scratch_dir("synthetic");
  synthetic::write_dataset(g, dir / "loc");
  EXPECT_EQ(read_named(dir / "loc" / "train.tsv"), g.train);
  EXPECT_EQ(read_named(dir / "loc" / "rules.tsv"), g.rules);
  EXPECT_FALSE(std::filesystem::exists(dir / "loc" / "valid.tsv"));
}

}  // namespace
}  // namespace kgsub
