// sstk/sst.h

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

#ifndef SSTK_SST_H_
#define SSTK_SST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sstk/acoustic.h"
#include "sstk/corpus.h"
#include "sstk/decode.h"
#include "sstk/dsp.h"

namespace sstk {

struct SelectionReport {
  size_t n_candidates = 0;
  double median_confidence = 0.0;
  size_t n_selected = 0;
  std::vector<std::string> selected_ids;
  std::vector<std::string> rejected_ids;
};

/// Sample median; the mean of the two middle order statistics for even n.
double SampleMedian(std::vector<double> values);

struct Selection {
  Manifest selected;
  Manifest rejected;
  SelectionReport report;
};

/// Keeps every record whose confidence is >= the median of all confidences.
/// Every record must carry a confidence.
Selection SelectByMedian(const Manifest &labeled);

/// "key value" lines: n_candidates, median, n_selected.
std::string FormatSelectionReport(const SelectionReport &r);

struct PseudoLabelResult {
  Manifest manifest;  // label_source pseudo, with transcript/frame labels/confidence
  std::vector<Hypothesis> hypotheses;
  std::vector<std::string> failed_ids;
};

/// Greedy-decodes each record and attaches the result as its labels. Existing
/// transcripts are ignored and replaced.
PseudoLabelResult PseudoLabel(const AcousticModel &model, const Manifest &unlabeled,
                              FeatureSource &features, const std::string &name);

enum class SstStrategy { kOodOnly, kPooled };
const char *SstStrategyName(SstStrategy s);
SstStrategy ParseSstStrategy(const std::string &s);

struct SstPlan {
  SstStrategy strategy = SstStrategy::kOodOnly;
  int iterations = 1;
  /// Applied to the unlabeled pool before the first iteration. Empty means
  /// the pool is used as given (already perturbed).
  std::vector<double> perturb_factors{0.9, 1.0, 1.1};
  /// Used for every stage; the seed is replaced by a per-stage derivation.
  TrainConfig train_cfg;
  uint64_t seed = 1;

  void Validate() const;
};

struct SstStage {
  int iteration = 0;
  std::filesystem::path dir;
  SelectionReport report;
};

struct SstResult {
  AcousticModel model;
  std::vector<SstStage> stages;
};

/// Runs `plan.iterations` rounds of pseudo-label, select, retrain. Each stage
/// goes to out_dir/stage-k (written under stage-k.tmp and renamed when
/// complete); stages already present are loaded instead of recomputed. The
/// architecture of every stage model copies the bootstrap's, with fresh
/// weights. `in_domain` supplies the gold data for the pooled strategy and
/// may be empty for ood_only.
SstResult RunSst(const AcousticModel &bootstrap, const Manifest &in_domain,
                 const Manifest &unlabeled_ood, const SstPlan &plan,
                 FeatureSource &features, const MfccConfig &framing,
                 const std::filesystem::path &out_dir);

}  // namespace sstk

#endif  // SSTK_SST_H_
