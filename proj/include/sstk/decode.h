// sstk/decode.h

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

#ifndef SSTK_DECODE_H_
#define SSTK_DECODE_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sstk/acoustic.h"
#include "sstk/corpus.h"
#include "sstk/dsp.h"
#include "sstk/lm.h"

namespace sstk {

struct Hypothesis {
  std::string utterance_id;
  std::vector<std::string> tokens;  // collapse(frame_label_path)
  std::vector<int> frame_label_path;
  std::vector<double> frame_scores;  // chosen log-probability per frame
  /// Mean of frame_scores (silence included); -inf for zero frames.
  double mean_confidence = 0.0;
  /// Acoustic score plus lm_weight times the LM score, for beam search.
  double total_score = 0.0;
};

/// Per frame argmax over a frames x labels log-probability matrix.
Hypothesis GreedyDecodeScores(const Eigen::MatrixXd &log_probs,
                              std::span<const int> labels);

/// Frame-synchronous beam search. Whenever the collapsed token sequence of a
/// path grows by a word, lm_weight * ln p_lm(word | last two words) is added;
/// at the end lm_weight * ln p_lm(</s> | ...) is added. Paths that agree on
/// (last frame label, last two words) are merged. `lm` may be null, in which
/// case the search is purely acoustic.
Hypothesis BeamDecodeScores(const Eigen::MatrixXd &log_probs,
                            std::span<const int> labels, const LanguageModel *lm,
                            int beam, double lm_weight);

Hypothesis GreedyDecode(const AcousticModel &model, const FeatureMatrix &feats);
Hypothesis BeamDecode(const AcousticModel &model, const FeatureMatrix &feats,
                      const LanguageModel *lm, int beam, double lm_weight);

struct DecoderConfig {
  bool use_beam = false;
  int beam = 8;
  double lm_weight = 1.0;
};

struct DecodeResult {
  std::vector<Hypothesis> hypotheses;  // sorted by utterance id
  std::vector<std::string> failed_ids;
};

/// Decodes every record. A record whose audio/features cannot be produced is
/// logged and listed in failed_ids. When `hyp_path` is non-empty the
/// hypothesis file is written there.
DecodeResult DecodeManifest(const AcousticModel &model, const Manifest &manifest,
                            FeatureSource &features, const DecoderConfig &cfg,
                            const LanguageModel *lm,
                            const std::filesystem::path &hyp_path = {});

/// "#sstk-hypotheses v1" header, then id<TAB>mean_confidence<TAB>tokens with
/// the confidence printed to 6 decimals.
std::string FormatHypotheses(std::span<const Hypothesis> hyps);
void WriteHypotheses(std::span<const Hypothesis> hyps, const std::filesystem::path &path);

struct HypothesisLine {
  std::string id;
  double mean_confidence = 0.0;
  std::vector<std::string> tokens;
};
std::vector<HypothesisLine> ReadHypotheses(const std::filesystem::path &path);

}  // namespace sstk

#endif  // SSTK_DECODE_H_
