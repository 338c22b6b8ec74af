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

#include "kgsub/checkpoint.h"
#include "kgsub/error.h"
#include "kgsub/training.h"
#include "unit/test_util.h"

namespace kgsub {
namespace {

Checkpoint sample_checkpoint() {
  Vocabulary vocab;
  for (const char* e : {"a", "b", "c", "d"}) vocab.intern_entity(e);
  for (const char* r : {"r", "s", "t"}) vocab.intern_relation(r);
  std::vector<SubsumptionRule> rules{{0, 1, RuleDirection::kDirect},
                                     {2, 1, RuleDirection::kInverse}};
  EmbeddingModel model = testing::random_model(
      ModelKind::kSimplEPlus, 5, 4, 3, 7, Nonlinearity::kLogistic,
      ConstraintGraph(rules, vocab.relation_names()));
  // Values that do not round trip through short decimal forms.
  model.entity_head(0, 0) = 1.0 / 3.0;
  model.entity_tail(1, 2) = -2.2250738585072014e-308;
  model.relation_bwd(2, 4) = 0.1 + 0.2;
  return {std::move(model), std::move(vocab), std::move(rules)};
}

void expect_equal(const Checkpoint& a, const Checkpoint& b) {
  EXPECT_EQ(a.vocab, b.vocab);
  EXPECT_EQ(a.rules, b.rules);
  EXPECT_EQ(a.model.kind, b.model.kind);
  EXPECT_EQ(a.model.phi, b.model.phi);
  EXPECT_EQ(a.model.constraints.empty(), b.model.constraints.empty());
  EXPECT_EQ(a.model.constraints.num_delta_slots(),
            b.model.constraints.num_delta_slots());
  for (Param p : {Param::kEntityHead, Param::kEntityTail, Param::kRelationFwd,
                  Param::kRelationBwd, Param::kDeltaFwd, Param::kDeltaBwd}) {
    const Matrix& x = param_matrix(a.model, p);
    const Matrix& y = param_matrix(b.model, p);
    ASSERT_EQ(x.rows(), y.rows());
    ASSERT_EQ(x.cols(), y.cols());
    for (std::size_t i = 0; i < x.values().size(); ++i) {
      // Bit-exact: the comparison is on doubles, not on printed text.
      ASSERT_EQ(x.values()[i], y.values()[i]);
    }
  }
}

TEST(Checkpoint, TextRoundTripIsExact) {
  const Checkpoint c = sample_checkpoint();
  std::stringstream s;
  write_checkpoint(s, c, CheckpointFormat::kText);
  EXPECT_EQ(s.str().rfind("kgsub-checkpoint ", 0), 0u);
  const Checkpoint back = read_checkpoint(s);
  expect_equal(c, back);
  for (RelationId r = 0; r < 3; ++r) {
    EXPECT_EQ(effective_relation(c.model, r).fwd,
              effective_relation(back.model, r).fwd);
  }
}

TEST(Checkpoint, BinaryRoundTripAndAutoDetect) {
  const Checkpoint c = sample_checkpoint();
  const auto dir = testing::scratch_dir("checkpoint");
  save_checkpoint(dir / "m.bin", c, CheckpointFormat::kBinary);
  save_checkpoint(dir / "m.txt", c, CheckpointFormat::kText);
  expect_equal(c, load_checkpoint(dir / "m.bin"));
  expect_equal(c, load_checkpoint(dir / "m.txt"));
  std::ifstream in(dir / "m.bin", std::ios::binary);
  char magic[8];
  in.read(magic, 8);
  EXPECT_EQ(std::string(magic, 8), "KGSUBBIN");
}

TEST(Checkpoint, UnconstrainedModelKeepsRules) {
  Checkpoint c = sample_checkpoint();
  c.model = testing::random_model(ModelKind::kComplEx, 3, 4, 3, 1);
  std::stringstream s;
  write_checkpoint(s, c, CheckpointFormat::kText);
  const Checkpoint back = read_checkpoint(s);
  EXPECT_TRUE(back.model.constraints.empty());
  EXPECT_EQ(back.rules, c.rules);
  expect_equal(c, back);
}

TEST(Checkpoint, CorruptedInputIsAParseError) {
  const Checkpoint c = sample_checkpoint();
  std::stringstream text;
  write_checkpoint(text, c, CheckpointFormat::kText);
  const std::string full = text.str();

  std::istringstream truncated(full.substr(0, full.size() / 2));
  EXPECT_THROW(read_checkpoint(truncated), ParseError);

  std::string bad_value = full;
  const auto pos = bad_value.find("entity_head");
  ASSERT_NE(pos, std::string::npos);
  const auto line_end = bad_value.find('\n', pos);
  bad_value.insert(line_end + 1, "x");
  std::istringstream corrupted(bad_value);
  EXPECT_THROW(read_checkpoint(corrupted), ParseError);

  std::istringstream wrong_header("not-a-checkpoint 1\n");
  EXPECT_THROW(read_checkpoint(wrong_header), ParseError);

  std::stringstream bin;
  write_checkpoint(bin, c, CheckpointFormat::kBinary);
  std::istringstream short_bin(bin.str().substr(0, 40));
  EXPECT_THROW(read_checkpoint(short_bin), ParseError);

  EXPECT_THROW(load_checkpoint(testing::scratch_dir("missing") / "none"),
               IoError);
}

}  // namespace
}  // namespace kgsub
