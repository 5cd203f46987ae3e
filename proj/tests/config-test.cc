// tests/config-test.cc

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

#include <gtest/gtest.h>

#include "sstk/config.h"
#include "test-util.h"

namespace sstk {
namespace {

ErrorKind KindOf(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.kind();
  }
  return ErrorKind::kInternal;
}

TEST(Config, DefaultsValidate) {
  ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  for (const std::string &key : ConfigKeys()) EXPECT_NO_THROW(GetConfigValue(cfg, key)) << key;
}

TEST(Config, SetAndGet) {
  ExperimentConfig cfg;
  SetConfigValue(&cfg, "experiment.seed", "17");
  SetConfigValue(&cfg, "model.hidden_dims", "32,16");
  SetConfigValue(&cfg, "perturb.factors", "0.95,1.05");
  SetConfigValue(&cfg, "decode.use_beam", "false");
  SetConfigValue(&cfg, "corpus.ood_snr_db", "12.5");
  EXPECT_EQ(cfg.seed, 17u);
  EXPECT_EQ(cfg.hidden_dims, (std::vector<int>{32, 16}));
  EXPECT_EQ(cfg.perturb_factors, (std::vector<double>{0.95, 1.05}));
  EXPECT_FALSE(cfg.decode.use_beam);
  EXPECT_EQ(cfg.corpus.synth.out_of_domain.snr_db, 12.5);
  EXPECT_EQ(GetConfigValue(cfg, "model.hidden_dims"), "32,16");
  EXPECT_EQ(GetConfigValue(cfg, "experiment.seed"), "17");
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  ExperimentConfig cfg;
  EXPECT_EQ(KindOf([&] { SetConfigValue(&cfg, "baseline.learnig_rate", "0.1"); }),
            ErrorKind::kConfig);
  EXPECT_EQ(KindOf([&] { SetConfigValue(&cfg, "experiment.seed", "-3"); }), ErrorKind::kConfig);
  EXPECT_EQ(KindOf([&] { SetConfigValue(&cfg, "decode.use_beam", "maybe"); }),
            ErrorKind::kConfig);
  EXPECT_EQ(KindOf([&] { SetConfigValue(&cfg, "baseline.epochs", "ten"); }), ErrorKind::kConfig);
  ExperimentConfig bad;
  bad.transfer.gold_fraction = 0.0;
  EXPECT_EQ(KindOf([&] { bad.Validate(); }), ErrorKind::kConfig);
  bad = ExperimentConfig();
  bad.decode.beam = 0;
  EXPECT_EQ(KindOf([&] { bad.Validate(); }), ErrorKind::kConfig);
}

TEST(Config, FileThenOverrides) {
  testing::TempDir dir("config");
  WriteTextFileAtomic(dir / "a.ini",
                      "[experiment]\nseed = 5\nout_dir = " + (dir / "out").string() +
                          "\n\n[baseline]\nepochs = 3\nlearning_rate = 0.02\n");
  ExperimentConfig cfg = LoadConfig(dir / "a.ini", {{"baseline.epochs", "4"}});
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.baseline.epochs, 4);
  EXPECT_EQ(cfg.baseline.learning_rate, 0.02);
  EXPECT_EQ(cfg.out_dir, (dir / "out").string());

  WriteTextFileAtomic(dir / "bad.ini", "[baseline]\nepoch = 3\n");
  EXPECT_EQ(KindOf([&] { LoadConfig(dir / "bad.ini", {}); }), ErrorKind::kConfig);
  WriteTextFileAtomic(dir / "root.ini", "seed = 3\n");
  EXPECT_EQ(KindOf([&] { LoadConfig(dir / "root.ini", {}); }), ErrorKind::kConfig);
  WriteTextFileAtomic(dir / "junk.ini", "[a\nb\n");
  EXPECT_EQ(KindOf([&] { LoadConfig(dir / "junk.ini", {}); }), ErrorKind::kConfig);
  EXPECT_EQ(KindOf([&] { LoadConfig(dir / "none.ini", {}); }), ErrorKind::kConfig);
}

TEST(Config, RelativeOutDirIsMadeAbsolute) {
  ExperimentConfig cfg = LoadConfig("", {{"experiment.out_dir", "rel/out"}});
  EXPECT_TRUE(std::filesystem::path(cfg.out_dir).is_absolute());
}

TEST(Config, MissingManifestIsAConfigError) {
  EXPECT_EQ(KindOf([&] {
              LoadConfig("", {{"corpus.train_manifest", "/nonexistent/train.manifest"}});
            }),
            ErrorKind::kConfig);
}

TEST(Config, FormatRoundTrips) {
  testing::TempDir dir("config-rt");
  ExperimentConfig cfg = LoadConfig("", {{"experiment.seed", "99"},
                                         {"model.hidden_dims", "7"},
                                         {"sst.epochs", "2"},
                                         {"lm.em_tolerance", "1e-7"},
                                         {"corpus.in_tilt_db_per_octave", "-1.5"}});
  const std::string text = FormatConfig(cfg);
  WriteTextFileAtomic(dir / "c.ini", text);
  ExperimentConfig back = LoadConfig(dir / "c.ini", {});
  EXPECT_EQ(FormatConfig(back), text);
  for (const std::string &key : ConfigKeys())
    EXPECT_EQ(GetConfigValue(back, key), GetConfigValue(cfg, key)) << key;
}

}  // namespace
}  // namespace sstk
