// tests/c-api-test.cc

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

// Exercises the library only through its C interface.

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "sstk/sstk-c.h"

namespace {

namespace fs = std::filesystem;

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sstk-capi-" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    sstk_set_log_level(0);
    ASSERT_EQ(sstk_config_new(nullptr, &cfg_), SSTK_OK);
    Set("experiment.out_dir", (dir_ / "exp").string());
    Set("model.hidden_dims", "16");
    Set("model.context", "2");
    Set("baseline.epochs", "3");
    Set("fine_tune.epochs", "1");
    Set("transfer.target.epochs", "1");
    Set("sst.epochs", "1");
    Set("decode.beam", "2");
    ASSERT_EQ(sstk_config_finalize(cfg_), SSTK_OK) << sstk_last_error();
  }
  void TearDown() override {
    sstk_config_free(cfg_);
    fs::remove_all(dir_);
  }
  void Set(const char *key, const std::string &value) {
    ASSERT_EQ(sstk_config_set(cfg_, key, value.c_str()), SSTK_OK) << sstk_last_error();
  }
  std::string Path(const std::string &name) const { return (dir_ / name).string(); }
  static std::string Take(char *s) {
    std::string out = s ? s : "";
    sstk_string_free(s);
    return out;
  }

  fs::path dir_;
  sstk_config *cfg_ = nullptr;
};

TEST_F(CApi, ConfigErrors) {
  EXPECT_EQ(sstk_config_set(cfg_, "no.such_key", "1"), SSTK_ERR_CONFIG);
  EXPECT_NE(std::strstr(sstk_last_error(), "no.such_key"), nullptr);
  EXPECT_EQ(sstk_config_has_key("baseline.epochs"), 1);
  EXPECT_EQ(sstk_config_has_key("baseline.epoch"), 0);
  EXPECT_EQ(sstk_config_has_key(nullptr), 0);
  char *v = nullptr;
  ASSERT_EQ(sstk_config_get(cfg_, "baseline.epochs", &v), SSTK_OK);
  EXPECT_EQ(Take(v), "3");
  EXPECT_EQ(sstk_config_set(nullptr, "a.b", "1"), SSTK_ERR_CONFIG);
  sstk_config *missing = nullptr;
  EXPECT_EQ(sstk_config_new(Path("none.ini").c_str(), &missing), SSTK_ERR_CONFIG);
  char *text = nullptr;
  ASSERT_EQ(sstk_config_format(cfg_, &text), SSTK_OK);
  EXPECT_NE(Take(text).find("[baseline]"), std::string::npos);
  EXPECT_STRNE(sstk_version(), "");
}

TEST_F(CApi, DataErrors) {
  sstk_manifest *m = nullptr;
  EXPECT_EQ(sstk_manifest_read(Path("none.manifest").c_str(), &m), SSTK_ERR_DATA);
  EXPECT_GT(std::strlen(sstk_last_error()), 0u);
  sstk_model *model = nullptr;
  std::ofstream(Path("junk.bin")) << "not a model";
  EXPECT_EQ(sstk_model_load(Path("junk.bin").c_str(), &model), SSTK_ERR_DATA);
  EXPECT_EQ(sstk_run_phase(cfg_, "baseline"), SSTK_ERR_PHASE);
  EXPECT_NE(std::strstr(sstk_last_error(), "prepare"), nullptr);
  EXPECT_EQ(sstk_run_phase(cfg_, "bogus"), SSTK_ERR_CONFIG);
}

TEST_F(CApi, TrainDecodeScoreSelect) {
  sstk_manifest *train = nullptr, *test = nullptr, *ood = nullptr;
  ASSERT_EQ(sstk_synth(cfg_, 6, "in", Path("audio").c_str(), "tr", &train), SSTK_OK)
      << sstk_last_error();
  ASSERT_EQ(sstk_synth(cfg_, 3, "in", Path("audio").c_str(), "te", &test), SSTK_OK);
  ASSERT_EQ(sstk_synth(cfg_, 4, "ood", Path("audio").c_str(), "ood", &ood), SSTK_OK);
  EXPECT_EQ(sstk_synth(cfg_, 1, "mars", Path("audio").c_str(), "x", &ood), SSTK_ERR_DATA);
  EXPECT_EQ(sstk_manifest_size(train), 6u);

  sstk_manifest *sp = nullptr;
  ASSERT_EQ(sstk_perturb(cfg_, train, Path("sp").c_str(), &sp), SSTK_OK) << sstk_last_error();
  EXPECT_EQ(sstk_manifest_size(sp), 18u);
  ASSERT_EQ(sstk_manifest_write(sp, Path("sp.manifest").c_str()), SSTK_OK);
  sstk_manifest *sp2 = nullptr;
  ASSERT_EQ(sstk_manifest_read(Path("sp.manifest").c_str(), &sp2), SSTK_OK);
  EXPECT_EQ(sstk_manifest_size(sp2), 18u);

  sstk_model *model = nullptr;
  ASSERT_EQ(sstk_train(cfg_, sp, 7, &model), SSTK_OK) << sstk_last_error();
  ASSERT_EQ(sstk_model_save(model, Path("m.bin").c_str()), SSTK_OK);
  sstk_model *loaded = nullptr;
  ASSERT_EQ(sstk_model_load(Path("m.bin").c_str(), &loaded), SSTK_OK);
  char *d1 = nullptr, *d2 = nullptr, *prov = nullptr;
  ASSERT_EQ(sstk_model_digest(model, &d1), SSTK_OK);
  ASSERT_EQ(sstk_model_digest(loaded, &d2), SSTK_OK);
  EXPECT_EQ(Take(d1), Take(d2));
  ASSERT_EQ(sstk_model_provenance(model, &prov), SSTK_OK);
  EXPECT_NE(Take(prov).find("mode=scratch"), std::string::npos);

  size_t failed = 99;
  ASSERT_EQ(sstk_decode(cfg_, model, test, nullptr, Path("h.txt").c_str(), &failed), SSTK_OK)
      << sstk_last_error();
  EXPECT_EQ(failed, 0u);
  double wer = -1;
  char *summary = nullptr;
  ASSERT_EQ(sstk_score(test, Path("h.txt").c_str(), &wer, &summary), SSTK_OK);
  EXPECT_GE(wer, 0.0);
  EXPECT_NE(Take(summary).find("n_ref "), std::string::npos);
  EXPECT_EQ(sstk_score(train, Path("h.txt").c_str(), &wer, nullptr), SSTK_ERR_DATA);

  sstk_manifest *pseudo = nullptr, *sel = nullptr, *rej = nullptr;
  ASSERT_EQ(sstk_pseudo_label(cfg_, model, ood, &pseudo), SSTK_OK);
  char *report = nullptr;
  ASSERT_EQ(sstk_select(pseudo, &sel, &rej, &report), SSTK_OK);
  EXPECT_EQ(sstk_manifest_size(sel) + sstk_manifest_size(rej), 4u);
  EXPECT_NE(Take(report).find("n_candidates 4"), std::string::npos);
  EXPECT_EQ(sstk_select(ood, &sel, &rej, nullptr), SSTK_ERR_DATA);

  sstk_model *ft = nullptr, *tr = nullptr;
  ASSERT_EQ(sstk_finetune(cfg_, model, sp, 3, &ft), SSTK_OK) << sstk_last_error();
  ASSERT_EQ(sstk_transfer(cfg_, model, sp, 3, &tr), SSTK_OK) << sstk_last_error();
  char *ft_prov = nullptr;
  ASSERT_EQ(sstk_model_provenance(ft, &ft_prov), SSTK_OK);
  EXPECT_NE(Take(ft_prov).find("mode=fine_tune"), std::string::npos);

  sstk_model *sst = nullptr;
  ASSERT_EQ(sstk_sst(cfg_, model, nullptr, ood, "ood_only", Path("sst").c_str(), &sst), SSTK_OK)
      << sstk_last_error();
  EXPECT_TRUE(fs::exists(dir_ / "sst" / "stage-1" / "model.bin"));
  EXPECT_EQ(sstk_sst(cfg_, model, nullptr, ood, "pooled", Path("sst2").c_str(), &sst),
            SSTK_ERR_CONFIG);

  for (sstk_manifest *m : {train, test, ood, sp, sp2, pseudo, sel, rej}) sstk_manifest_free(m);
  for (sstk_model *m : {model, loaded, ft, tr, sst}) sstk_model_free(m);
}

TEST_F(CApi, LanguageModels) {
  std::ofstream(Path("a.txt")) << "w01 w02\nw01 w02 w03\nw02 w01\n";
  std::ofstream(Path("b.txt")) << "w03 w03\nw04\n";
  std::ofstream(Path("dev.txt")) << "w01 w02\nw02 w01\n";
  ASSERT_EQ(sstk_lm_train(Path("a.txt").c_str(), 3, Path("a.arpa").c_str()), SSTK_OK);
  ASSERT_EQ(sstk_lm_train(Path("b.txt").c_str(), 2, Path("b.arpa").c_str()), SSTK_OK);
  EXPECT_EQ(sstk_lm_train(Path("a.txt").c_str(), 5, Path("c.arpa").c_str()), SSTK_ERR_CONFIG);
  std::string a = Path("a.arpa"), b = Path("b.arpa");
  const char *paths[] = {a.c_str(), b.c_str()};
  char *weights = nullptr;
  ASSERT_EQ(sstk_lm_interp(paths, 2, Path("dev.txt").c_str(), Path("mix.lm").c_str(), &weights),
            SSTK_OK)
      << sstk_last_error();
  EXPECT_NE(Take(weights).find("dev_perplexity"), std::string::npos);
  sstk_lm *mix = nullptr, *la = nullptr;
  ASSERT_EQ(sstk_lm_load(Path("mix.lm").c_str(), &mix), SSTK_OK);
  ASSERT_EQ(sstk_lm_load(a.c_str(), &la), SSTK_OK);
  double p_mix = 0, p_a = 0;
  ASSERT_EQ(sstk_lm_perplexity(mix, Path("dev.txt").c_str(), &p_mix), SSTK_OK);
  ASSERT_EQ(sstk_lm_perplexity(la, Path("dev.txt").c_str(), &p_a), SSTK_OK);
  EXPECT_LE(p_mix, p_a * (1 + 1e-6));
  std::ofstream(Path("bad.arpa")) << "\\data\\\nngram 1=3\n\n\\1-grams:\n-1 a\n\n\\end\\\n";
  sstk_lm *bad = nullptr;
  EXPECT_EQ(sstk_lm_load(Path("bad.arpa").c_str(), &bad), SSTK_ERR_DATA);
  sstk_lm_free(mix);
  sstk_lm_free(la);
}

TEST_F(CApi, ReportFromRecords) {
  std::ofstream(Path("r.records")) << "condition=baseline\twer=24.8\n"
                                      "condition=ood_only\twer=26.9\n";
  char *table = nullptr;
  ASSERT_EQ(sstk_report(Path("r.records").c_str(), nullptr, &table), SSTK_OK);
  std::string t = Take(table);
  EXPECT_NE(t.find("-8.5"), std::string::npos) << t;
  EXPECT_EQ(sstk_report(Path("r.records").c_str(), "pooled", &table), SSTK_ERR_DATA);
}

}  // namespace
