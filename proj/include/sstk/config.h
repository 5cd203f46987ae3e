// sstk/config.h

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

#ifndef SSTK_CONFIG_H_
#define SSTK_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sstk/acoustic.h"
#include "sstk/corpus.h"
#include "sstk/decode.h"
#include "sstk/dsp.h"

namespace sstk {

struct CorpusSection {
  /// A 30-word task with a noisy in-domain channel, so that the baseline is
  /// neither perfect nor hopeless.
  SynthSpec synth{.vocabulary_size = 30, .in_domain = {0.0, 5.0, 0.0}};
  int n_train = 30;
  int n_dev = 40;
  int n_test = 300;
  int n_ood = 200;
  /// Existing manifests used instead of synthesis when all four are set.
  std::string train_manifest, dev_manifest, test_manifest, ood_manifest;
};

struct TrainSection {
  double learning_rate = 0.05;
  int epochs = 10;
  int batch_size = 128;
  double l2 = 0.0;

  TrainConfig ToTrainConfig(TrainMode mode, uint64_t seed) const;
};

struct FineTuneSection {
  double lr_scale = 0.5;
  int epochs = 30;
  int batch_size = 128;
  double l2 = 0.0;
};

struct TransferSection {
  bool enabled = true;
  /// Training of the out-of-domain source model on its gold labels.
  TrainSection source;
  /// Training of the transferred model on in-domain gold data.
  TrainSection target;
  /// Fraction of the in-domain gold training set used for target training.
  double gold_fraction = 1.0;
};

struct LmSection {
  int order = 3;
  /// Sentences of extra in-domain text beyond the training transcripts.
  int in_domain_sentences = 400;
  /// Sentences of out-of-domain text (a different word grammar).
  int out_of_domain_sentences = 400;
  /// Extra component LMs trained from these sentence files.
  std::vector<std::string> extra_text;
  double em_tolerance = 1e-6;
  int em_max_iterations = 100;
};

struct ExperimentConfig {
  uint64_t seed = 1;
  std::string out_dir = "sstk-out";
  CorpusSection corpus;
  MfccConfig mfcc;
  std::vector<double> perturb_factors{0.9, 1.0, 1.1};
  std::vector<int> hidden_dims{128, 128};
  int context = 4;
  TrainSection baseline;
  int sst_iterations = 1;
  TrainSection sst;
  FineTuneSection fine_tune;
  TransferSection transfer;
  LmSection lm;
  DecoderConfig decode{true, 8, 1.0};

  /// Throws kConfig on invalid values or missing referenced files.
  void Validate() const;
};

/// Every accepted "section.key" name, in canonical order.
std::vector<std::string> ConfigKeys();

/// Sets one dotted key from text. Unknown keys and unparsable values throw
/// kConfig.
void SetConfigValue(ExperimentConfig *cfg, const std::string &key,
                    const std::string &value);
std::string GetConfigValue(const ExperimentConfig &cfg, const std::string &key);

/// Flattens an INI file into "section.key" -> value.
std::map<std::string, std::string> ReadIni(const std::filesystem::path &path);

/// Makes out_dir and the input paths absolute, then validates.
void FinalizeConfig(ExperimentConfig *cfg);

/// Defaults, then the file (if non-empty), then the overrides in order.
/// out_dir and manifest paths are made absolute.
ExperimentConfig LoadConfig(const std::filesystem::path &path,
                            const std::vector<std::pair<std::string, std::string>> &overrides);

/// Canonical INI text of every key; LoadConfig of it gives the same config.
std::string FormatConfig(const ExperimentConfig &cfg);

}  // namespace sstk

#endif  // SSTK_CONFIG_H_
