// tests/eval-test.cc

// Copyright 2026  The sstk Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "sstk/eval.h"
#include "test-util.h"

namespace sstk {
namespace {

using Tokens = std::vector<std::string>;

Tokens RandomTokens(Rng *rng, int max_len, int alphabet) {
  Tokens t;
  int n = static_cast<int>(rng->UniformRange(0, max_len));
  for (int i = 0; i < n; i++) t.push_back(std::string(1, 'a' + rng->UniformInt(alphabet)));
  return t;
}

// Replays the edit script and checks it turns ref into hyp with the stated
// counts.
void CheckScript(const Tokens &ref, const Tokens &hyp, const Alignment &al) {
  size_t i = 0, j = 0;
  long s = 0, ins = 0, del = 0;
  for (EditOp op : al.ops) {
    switch (op) {
      case EditOp::kMatch:
        ASSERT_LT(i, ref.size());
        ASSERT_LT(j, hyp.size());
        EXPECT_EQ(ref[i++], hyp[j++]);
        break;
      case EditOp::kSubstitute:
        ASSERT_LT(i, ref.size());
        ASSERT_LT(j, hyp.size());
        EXPECT_NE(ref[i++], hyp[j++]);
        s++;
        break;
      case EditOp::kInsert:
        ASSERT_LT(j, hyp.size());
        j++;
        ins++;
        break;
      case EditOp::kDelete:
        ASSERT_LT(i, ref.size());
        i++;
        del++;
        break;
    }
  }
  EXPECT_EQ(i, ref.size());
  EXPECT_EQ(j, hyp.size());
  EXPECT_EQ(s, al.result.substitutions);
  EXPECT_EQ(ins, al.result.insertions);
  EXPECT_EQ(del, al.result.deletions);
}

TEST(Align, Examples) {
  Tokens ref{"a", "b", "c"};
  Alignment same = Align(ref, ref);
  EXPECT_EQ(same.result.errors(), 0);
  EXPECT_EQ(same.result.wer, 0.0);

  Alignment sub = Align(ref, Tokens{"a", "x", "c"});
  EXPECT_EQ(sub.result.substitutions, 1);
  EXPECT_NEAR(sub.result.wer, 100.0 / 3, 1e-12);

  Alignment del = Align(ref, Tokens{"a", "c"});
  EXPECT_EQ(del.result.deletions, 1);
  Alignment ins = Align(ref, Tokens{"a", "b", "x", "c"});
  EXPECT_EQ(ins.result.insertions, 1);

  Alignment all_ins = Align(Tokens{}, Tokens{"a"});
  EXPECT_TRUE(all_ins.result.infinite);
  EXPECT_TRUE(std::isinf(all_ins.result.wer));
  Alignment empty = Align(Tokens{}, Tokens{});
  EXPECT_FALSE(empty.result.infinite);
  EXPECT_EQ(empty.result.wer, 0.0);

  Alignment wipe = Align(ref, Tokens{});
  EXPECT_EQ(wipe.result.deletions, 3);
  EXPECT_EQ(wipe.result.wer, 100.0);
}

TEST(Align, TiesPreferSubstitution) {
  // "a b" vs "b c": two substitutions or one deletion plus one insertion are
  // both cost 2; substitution wins.
  Alignment al = Align(Tokens{"a", "b"}, Tokens{"b", "c"});
  EXPECT_EQ(al.result.errors(), 2);
  EXPECT_EQ(al.result.substitutions, 2);
}

TEST(Align, MatchesOracleProperty) {
  Rng rng(12);
  for (int trial = 0; trial < 3000; trial++) {
    Tokens r = RandomTokens(&rng, 7, 3), h = RandomTokens(&rng, 7, 3);
    Alignment al = Align(r, h);
    ASSERT_EQ(al.result.errors(), testing::OracleEditDistance(r, h));
    CheckScript(r, h, al);
    EXPECT_EQ(al.result.n_ref_tokens, static_cast<long>(r.size()));
  }
}

TEST(Align, TriangleInequalityProperty) {
  Rng rng(13);
  for (int trial = 0; trial < 1000; trial++) {
    Tokens a = RandomTokens(&rng, 6, 3), b = RandomTokens(&rng, 6, 3),
           c = RandomTokens(&rng, 6, 3);
    long ab = Align(a, b).result.errors(), bc = Align(b, c).result.errors(),
         ac = Align(a, c).result.errors();
    EXPECT_LE(ac, ab + bc);
    EXPECT_EQ(ab, Align(b, a).result.errors());
  }
}

Manifest Refs(const std::vector<std::pair<std::string, Tokens>> &items) {
  std::vector<UtteranceRecord> recs;
  for (const auto &[id, t] : items) {
    UtteranceRecord r;
    r.id = id;
    r.audio = id + ".wav";
    r.transcript = t;
    recs.push_back(r);
  }
  return Manifest("refs", recs);
}

TEST(CorpusWer, PoolsCounts) {
  Manifest refs = Refs({{"a", {"x", "y"}}, {"b", {"z", "z", "z"}}});
  std::vector<HypothesisLine> hyps{{"a", -1.0, {"x"}}, {"b", -1.0, {"z", "q", "z", "z"}}};
  WerResult r = CorpusWer(refs, hyps);
  EXPECT_EQ(r.n_ref_tokens, 5);
  EXPECT_EQ(r.deletions, 1);
  EXPECT_EQ(r.insertions, 1);
  EXPECT_DOUBLE_EQ(r.wer, 40.0);
}

TEST(CorpusWer, IdSetMustMatch) {
  Manifest refs = Refs({{"a", {"x"}}, {"b", {"y"}}});
  std::vector<HypothesisLine> missing{{"a", 0, {"x"}}};
  std::vector<HypothesisLine> extra{{"a", 0, {"x"}}, {"b", 0, {}}, {"c", 0, {}}};
  std::vector<HypothesisLine> dup{{"a", 0, {"x"}}, {"a", 0, {"x"}}, {"b", 0, {}}};
  for (const auto *h : {&missing, &extra, &dup}) {
    try {
      CorpusWer(refs, *h);
      FAIL();
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kData);
    }
  }
  try {
    CorpusWer(refs, missing);
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("b"), std::string::npos);
  }
}

TEST(Report, RelativeImprovementExamples) {
  EXPECT_EQ(RoundHalfAway(RelativeImprovement(24.8, 26.9), 1), -8.5);
  EXPECT_EQ(RoundHalfAway(RelativeImprovement(24.8, 23.3), 1), 6.0);
  EXPECT_EQ(RoundHalfAway(RelativeImprovement(55.1, 46.1), 1), 16.3);
  EXPECT_EQ(RoundHalfAway(0.25, 1), 0.3);
  EXPECT_EQ(RoundHalfAway(-0.25, 1), -0.3);
  EXPECT_EQ(RoundHalfAway(2.5, 0), 3.0);
  EXPECT_THROW(RelativeImprovement(0.0, 1.0), Error);
}

TEST(Report, RenderAndRecords) {
  ExperimentReport rep = MakeReport(
      {{"pooled", 24.7}, {"baseline", 24.8}, {"ood_only", 26.9}, {"extra", 30.0}});
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_EQ(rep.rows[0].condition, "baseline");
  EXPECT_FALSE(rep.rows[0].relative_improvement);
  EXPECT_EQ(rep.rows[1].condition, "ood_only");
  EXPECT_EQ(rep.rows[2].condition, "pooled");
  EXPECT_EQ(rep.rows[3].condition, "extra");
  const std::string table = RenderReport(rep);
  EXPECT_EQ(table,
            "condition       WER      %RI\n"
            "----------------------------\n"
            "baseline      24.80        -\n"
            "ood_only      26.90     -8.5\n"
            "pooled        24.70      0.4\n"
            "extra         30.00    -21.0\n"
            "baseline: baseline\n");
  auto back = ParseWerRecords(FormatReportRecords(rep), "r");
  ASSERT_EQ(back.size(), 4u);
  EXPECT_EQ(back[1], (std::pair<std::string, double>{"ood_only", 26.9}));
  EXPECT_THROW(MakeReport({{"pooled", 1.0}}), Error);
  EXPECT_THROW(MakeReport({{"baseline", 1.0}, {"baseline", 2.0}}), Error);
  EXPECT_THROW(ParseWerRecords("condition=a\n", "r"), Error);
}

}  // namespace
}  // namespace sstk
