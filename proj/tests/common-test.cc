// tests/common-test.cc

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
#include <limits>

#include <gtest/gtest.h>

#include "sstk/common.h"
#include "test-util.h"

namespace sstk {
namespace {

TEST(Common, Fnv1aKnownValues) {
  // Reference values of 64-bit FNV-1a.
  EXPECT_EQ(Fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(Common, DeriveSeedSeparatesNamesAndMasters) {
  EXPECT_EQ(DeriveSeed(1, "x"), DeriveSeed(1, "x"));
  EXPECT_NE(DeriveSeed(1, "x"), DeriveSeed(1, "y"));
  EXPECT_NE(DeriveSeed(1, "x"), DeriveSeed(2, "x"));
}

TEST(Common, RngIsReproducibleAndInRange) {
  Rng a(7), b(7);
  for (int i = 0; i < 1000; i++) {
    double u = a.Uniform();
    EXPECT_EQ(u, b.Uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    uint64_t k = a.UniformInt(13);
    EXPECT_EQ(k, b.UniformInt(13));
    EXPECT_LT(k, 13u);
    int64_t r = a.UniformRange(-3, 3);
    EXPECT_EQ(r, b.UniformRange(-3, 3));
    EXPECT_GE(r, -3);
    EXPECT_LE(r, 3);
  }
}

TEST(Common, RngGaussianMoments) {
  Rng r(3);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; i++) {
    double g = r.Gaussian();
    sum += g;
    sq += g * g;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Common, ShuffleIsAPermutation) {
  Rng r(11);
  std::vector<int> v(50);
  for (int i = 0; i < 50; i++) v[i] = i;
  r.Shuffle(&v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; i++) EXPECT_EQ(sorted[i], i);
}

TEST(Common, SplitTrimJoin) {
  EXPECT_EQ(SplitString("a,,b", ',').size(), 2u);
  EXPECT_EQ(SplitString("a,,b", ',', false).size(), 3u);
  EXPECT_EQ(Trim("  x y \t\n"), "x y");
  EXPECT_EQ(Join({"a", "b", "c"}, "-"), "a-b-c");
}

TEST(Common, ParseNumbers) {
  EXPECT_DOUBLE_EQ(ParseDouble("2.5", "v"), 2.5);
  EXPECT_EQ(ParseInt("-12", "v"), -12);
  EXPECT_EQ(ParseDoubleList("0.9, 1.0,1.1", "v"), (std::vector<double>{0.9, 1.0, 1.1}));
  EXPECT_EQ(ParseIntList("128,64", "v"), (std::vector<int>{128, 64}));
  try {
    ParseDouble("abc", "thing");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("thing"), std::string::npos);
  }
  EXPECT_THROW(ParseInt("3x", "v"), Error);
  EXPECT_THROW(ParseDouble("", "v"), Error);
}

TEST(Common, FormatDoubleRoundTrips) {
  Rng r(5);
  for (int i = 0; i < 2000; i++) {
    double v = (r.Uniform() - 0.5) * std::pow(10.0, r.UniformRange(-8, 8));
    EXPECT_EQ(ParseDouble(FormatDouble(v), "v"), v);
  }
  EXPECT_EQ(FormatFixed(-0.0001, 2), "0.00");
  EXPECT_EQ(FormatFixed(2.345, 1), "2.3");
}

TEST(Common, AtomicWriteAndRead) {
  testing::TempDir dir("common");
  auto p = dir / "sub/file.txt";
  WriteTextFileAtomic(p, "hello\n");
  EXPECT_EQ(ReadTextFile(p), "hello\n");
  WriteTextFileAtomic(p, "again");
  EXPECT_EQ(ReadTextFile(p), "again");
  EXPECT_EQ(HashFile(p), Fnv1a("again"));
  try {
    ReadTextFile(dir / "missing");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

}  // namespace
}  // namespace sstk
