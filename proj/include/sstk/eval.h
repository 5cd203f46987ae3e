// sstk/eval.h

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

#ifndef SSTK_EVAL_H_
#define SSTK_EVAL_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sstk/corpus.h"
#include "sstk/decode.h"

namespace sstk {

struct WerResult {
  long n_ref_tokens = 0;
  long substitutions = 0;
  long insertions = 0;
  long deletions = 0;
  /// Percent. +inf (with `infinite` set) when there are errors but no
  /// reference tokens.
  double wer = 0.0;
  bool infinite = false;

  long errors() const { return substitutions + insertions + deletions; }
  WerResult &operator+=(const WerResult &o);
};

enum class EditOp { kMatch, kSubstitute, kInsert, kDelete };

struct Alignment {
  WerResult result;
  std::vector<EditOp> ops;  // in reference order
};

/// Unit-cost Levenshtein alignment. Among equally cheap alignments the trace
/// prefers substitution (or match), then insertion, then deletion, scanning
/// from the end of both sequences.
Alignment Align(std::span<const std::string> ref, std::span<const std::string> hyp);

/// Pooled counts over all utterances. The hypothesis ids must be exactly the
/// reference ids; anything else is an error listing the offending ids.
WerResult CorpusWer(const Manifest &refs, std::span<const HypothesisLine> hyps);
WerResult CorpusWer(const Manifest &refs, const std::filesystem::path &hyp_file);

/// 100 * (baseline - system) / baseline; baseline must be > 0.
double RelativeImprovement(double baseline_wer, double system_wer);

/// Rounds half away from zero to `decimals` places, after discarding binary
/// noise below 1e-9.
double RoundHalfAway(double v, int decimals);

struct ReportRow {
  std::string condition;
  double wer = 0.0;
  std::optional<double> relative_improvement;  // absent for the baseline
};

struct ExperimentReport {
  std::string baseline;
  std::vector<ReportRow> rows;
};

/// Canonical condition order: baseline, ood_only, ood_only+ft, pooled,
/// pooled+ft, transfer. Other condition names follow in input order.
const std::vector<std::string> &ConditionOrder();

/// Builds report rows with RI relative to `baseline`, which must be present.
ExperimentReport MakeReport(const std::vector<std::pair<std::string, double>> &results,
                            const std::string &baseline = "baseline");

/// Fixed-width text table.
std::string RenderReport(const ExperimentReport &report);

/// Line-delimited records "condition=<c>\twer=<w>\tri=<r|->".
std::string FormatReportRecords(const ExperimentReport &report);
/// Reads records back as (condition, wer) pairs.
std::vector<std::pair<std::string, double>> ParseWerRecords(const std::string &text,
                                                            const std::string &origin);

}  // namespace sstk

#endif  // SSTK_EVAL_H_
