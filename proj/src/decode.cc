// decode.cc

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

#include "sstk/decode.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "sstk/common.h"
#include "sstk/log.h"

namespace sstk {

namespace {

void Finish(Hypothesis *hyp) {
  hyp->tokens = CollapseToTokens(hyp->frame_label_path);
  if (hyp->frame_scores.empty()) {
    hyp->mean_confidence = -std::numeric_limits<double>::infinity();
    return;
  }
  double sum = 0.0;
  for (double s : hyp->frame_scores) sum += s;
  hyp->mean_confidence = sum / static_cast<double>(hyp->frame_scores.size());
}

void CheckShape(const Eigen::MatrixXd &log_probs, std::span<const int> labels) {
  if (log_probs.rows() > 0 && log_probs.cols() != static_cast<Eigen::Index>(labels.size()))
    Fail(ErrorKind::kData, "decode: posterior matrix has ", log_probs.cols(),
         " columns for ", labels.size(), " labels");
}

}  // namespace

Hypothesis GreedyDecodeScores(const Eigen::MatrixXd &log_probs,
                              std::span<const int> labels) {
  CheckShape(log_probs, labels);
  Hypothesis hyp;
  for (Eigen::Index t = 0; t < log_probs.rows(); ++t) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < log_probs.cols(); ++k)
      if (log_probs(t, k) > log_probs(t, best)) best = k;
    hyp.frame_label_path.push_back(labels[best]);
    hyp.frame_scores.push_back(log_probs(t, best));
    hyp.total_score += log_probs(t, best);
  }
  Finish(&hyp);
  return hyp;
}

Hypothesis BeamDecodeScores(const Eigen::MatrixXd &log_probs,
                            std::span<const int> labels, const LanguageModel *lm,
                            int beam, double lm_weight) {
  CheckShape(log_probs, labels);
  if (beam < 1) Fail(ErrorKind::kConfig, "decode: beam must be >= 1");
  if (!(lm_weight >= 0.0)) Fail(ErrorKind::kConfig, "decode: lm_weight must be >= 0");
  const int n_labels = static_cast<int>(labels.size());
  const int frames = static_cast<int>(log_probs.rows());
  const bool use_lm = lm != nullptr;

  std::vector<int> lm_ids(n_labels, Vocabulary::kNone);
  if (use_lm)
    for (int k = 0; k < n_labels; ++k)
      if (labels[k] != kSilenceLabel) lm_ids[k] = lm->vocab().Id(LabelToken(labels[k]));

  struct Node {
    int label;  // output index of the frame, -1 before the first frame
    int h2, h1;
    double score;
    double acoustic;
    int back;
  };
  std::vector<std::vector<Node>> lattice(frames + 1);
  lattice[0].push_back({-1, Vocabulary::kNone, Vocabulary::kBos, 0.0, 0.0, -1});

  std::unordered_map<uint64_t, int> index;
  for (int t = 0; t < frames; ++t) {
    std::vector<Node> next;
    index.clear();
    const std::vector<Node> &cur = lattice[t];
    for (int s = 0; s < static_cast<int>(cur.size()); ++s) {
      const Node &from = cur[s];
      for (int k = 0; k < n_labels; ++k) {
        const double ac = log_probs(t, k);
        Node n{k, from.h2, from.h1, from.score + ac, from.acoustic + ac, s};
        if (labels[k] != kSilenceLabel && k != from.label) {
          if (use_lm) {
            if (lm_weight != 0.0)
              n.score += lm_weight * lm->LogProb(lm_ids[k], from.h2, from.h1);
            n.h2 = from.h1;
            n.h1 = lm_ids[k];
          }
        }
        const uint64_t key = (static_cast<uint64_t>(k) << 42) |
                             (static_cast<uint64_t>(n.h2 + 1) << 21) |
                             static_cast<uint64_t>(n.h1 + 1);
        auto [it, inserted] = index.emplace(key, static_cast<int>(next.size()));
        if (inserted) next.push_back(n);
        else if (n.score > next[it->second].score) next[it->second] = n;
      }
    }
    std::stable_sort(next.begin(), next.end(),
                     [](const Node &a, const Node &b) { return a.score > b.score; });
    if (static_cast<int>(next.size()) > beam) next.resize(beam);
    lattice[t + 1] = std::move(next);
  }

  const std::vector<Node> &last = lattice[frames];
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < static_cast<int>(last.size()); ++s) {
    double score = last[s].score;
    if (use_lm && lm_weight != 0.0 && frames > 0)
      score += lm_weight * lm->LogProb(Vocabulary::kEos, last[s].h2, last[s].h1);
    if (s == 0 || score > best_score) {
      best_score = score;
      best = s;
    }
  }

  Hypothesis hyp;
  hyp.frame_label_path.resize(frames);
  hyp.frame_scores.resize(frames);
  int s = best;
  for (int t = frames; t > 0; --t) {
    const Node &n = lattice[t][s];
    hyp.frame_label_path[t - 1] = labels[n.label];
    hyp.frame_scores[t - 1] = log_probs(t - 1, n.label);
    s = n.back;
  }
  hyp.total_score = frames > 0 ? best_score : 0.0;
  Finish(&hyp);
  return hyp;
}

Hypothesis GreedyDecode(const AcousticModel &model, const FeatureMatrix &feats) {
  return GreedyDecodeScores(Forward(model, feats), model.labels);
}

Hypothesis BeamDecode(const AcousticModel &model, const FeatureMatrix &feats,
                      const LanguageModel *lm, int beam, double lm_weight) {
  return BeamDecodeScores(Forward(model, feats), model.labels, lm, beam, lm_weight);
}

DecodeResult DecodeManifest(const AcousticModel &model, const Manifest &manifest,
                            FeatureSource &features, const DecoderConfig &cfg,
                            const LanguageModel *lm,
                            const std::filesystem::path &hyp_path) {
  DecodeResult result;
  for (const UtteranceRecord &rec : manifest.records()) {
    try {
      const FeatureMatrix &feats = features.Features(rec);
      Hypothesis hyp = cfg.use_beam ? BeamDecode(model, feats, lm, cfg.beam, cfg.lm_weight)
                                    : GreedyDecode(model, feats);
      hyp.utterance_id = rec.id;
      result.hypotheses.push_back(std::move(hyp));
    } catch (const Error &e) {
      if (e.kind() == ErrorKind::kConfig) throw;
      SSTK_WARN << "skipping utterance " << rec.id << ": " << e.what();
      result.failed_ids.push_back(rec.id);
    }
  }
  if (!result.failed_ids.empty())
    SSTK_WARN << "decoded " << result.hypotheses.size() << " utterances, "
              << result.failed_ids.size() << " failed";
  if (!hyp_path.empty()) WriteHypotheses(result.hypotheses, hyp_path);
  return result;
}

namespace {
constexpr const char *kHypHeader = "#sstk-hypotheses v1";
}

std::string FormatHypotheses(std::span<const Hypothesis> hyps) {
  std::vector<const Hypothesis *> sorted;
  for (const Hypothesis &h : hyps) sorted.push_back(&h);
  std::sort(sorted.begin(), sorted.end(), [](const Hypothesis *a, const Hypothesis *b) {
    return a->utterance_id < b->utterance_id;
  });
  std::string out = std::string(kHypHeader) + "\n";
  for (const Hypothesis *h : sorted)
    out += h->utterance_id + "\t" + FormatFixed(h->mean_confidence, 6) + "\t" +
           Join(h->tokens, " ") + "\n";
  return out;
}

void WriteHypotheses(std::span<const Hypothesis> hyps, const std::filesystem::path &path) {
  WriteTextFileAtomic(path, FormatHypotheses(hyps));
}

std::vector<HypothesisLine> ReadHypotheses(const std::filesystem::path &path) {
  const std::string text = ReadTextFile(path);
  std::vector<std::string> lines = SplitString(text, '\n', false);
  if (lines.empty() || Trim(lines[0]) != kHypHeader)
    Fail(ErrorKind::kData, path.string(), ": missing '", kHypHeader, "' header");
  std::vector<HypothesisLine> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = SplitString(line, '\t', false);
    if (f.size() != 3)
      Fail(ErrorKind::kData, path.string(), ":", i + 1, ": expected 3 tab-separated fields");
    HypothesisLine h;
    h.id = f[0];
    h.mean_confidence = ParseDouble(f[1], "mean_confidence");
    h.tokens = SplitString(f[2], ' ');
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace sstk
