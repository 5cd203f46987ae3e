// eval.cc

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

#include "sstk/eval.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "sstk/common.h"

namespace sstk {

namespace {

void FinishWer(WerResult *r) {
  if (r->n_ref_tokens > 0) {
    r->wer = 100.0 * static_cast<double>(r->errors()) / static_cast<double>(r->n_ref_tokens);
    r->infinite = false;
  } else if (r->errors() > 0) {
    r->wer = std::numeric_limits<double>::infinity();
    r->infinite = true;
  } else {
    r->wer = 0.0;
    r->infinite = false;
  }
}

}  // namespace

WerResult &WerResult::operator+=(const WerResult &o) {
  n_ref_tokens += o.n_ref_tokens;
  substitutions += o.substitutions;
  insertions += o.insertions;
  deletions += o.deletions;
  FinishWer(this);
  return *this;
}

Alignment Align(std::span<const std::string> ref, std::span<const std::string> hyp) {
  const size_t n = ref.size(), m = hyp.size();
  // d[i][j]: cost of aligning ref[0..i) with hyp[0..j).
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i)
    for (size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j - 1] + (ref[i - 1] != hyp[j - 1] ? 1 : 0),
                          d[i][j - 1] + 1, d[i - 1][j] + 1});

  Alignment a;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (d[i][j] == d[i - 1][j - 1] + (same ? 0 : 1)) {
        a.ops.push_back(same ? EditOp::kMatch : EditOp::kSubstitute);
        if (!same) ++a.result.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && d[i][j] == d[i][j - 1] + 1) {
      a.ops.push_back(EditOp::kInsert);
      ++a.result.insertions;
      --j;
    } else {
      a.ops.push_back(EditOp::kDelete);
      ++a.result.deletions;
      --i;
    }
  }
  std::reverse(a.ops.begin(), a.ops.end());
  a.result.n_ref_tokens = static_cast<long>(n);
  FinishWer(&a.result);
  return a;
}

WerResult CorpusWer(const Manifest &refs, std::span<const HypothesisLine> hyps) {
  std::map<std::string, const HypothesisLine *> by_id;
  std::vector<std::string> duplicate, extra, missing;
  for (const HypothesisLine &h : hyps) {
    if (!by_id.emplace(h.id, &h).second) duplicate.push_back(h.id);
    if (!refs.Find(h.id)) extra.push_back(h.id);
  }
  for (const UtteranceRecord &r : refs.records())
    if (!by_id.count(r.id)) missing.push_back(r.id);
  if (!duplicate.empty() || !extra.empty() || !missing.empty()) {
    std::string msg = "score: hypothesis ids do not match the reference manifest";
    if (!missing.empty()) msg += "; missing: " + Join(missing, " ");
    if (!extra.empty()) msg += "; not in reference: " + Join(extra, " ");
    if (!duplicate.empty()) msg += "; duplicated: " + Join(duplicate, " ");
    Fail(ErrorKind::kData, msg);
  }
  WerResult total;
  for (const UtteranceRecord &r : refs.records()) {
    if (!r.transcript)
      Fail(ErrorKind::kData, "score: reference ", r.id, " has no transcript");
    total += Align(*r.transcript, by_id.at(r.id)->tokens).result;
  }
  FinishWer(&total);
  return total;
}

WerResult CorpusWer(const Manifest &refs, const std::filesystem::path &hyp_file) {
  std::vector<HypothesisLine> hyps = ReadHypotheses(hyp_file);
  return CorpusWer(refs, hyps);
}

double RelativeImprovement(double baseline_wer, double system_wer) {
  if (!(baseline_wer > 0.0))
    Fail(ErrorKind::kData, "relative improvement needs a baseline WER > 0 (got ",
         baseline_wer, ")");
  return 100.0 * (baseline_wer - system_wer) / baseline_wer;
}

double RoundHalfAway(double v, int decimals) {
  if (!std::isfinite(v)) return v;
  const double cleaned = std::round(v * 1e9) / 1e9;
  const double scale = std::pow(10.0, decimals);
  return std::round(cleaned * scale) / scale;
}

const std::vector<std::string> &ConditionOrder() {
  static const std::vector<std::string> order = {
      "baseline", "ood_only", "ood_only+ft", "pooled", "pooled+ft", "transfer"};
  return order;
}

ExperimentReport MakeReport(const std::vector<std::pair<std::string, double>> &results,
                            const std::string &baseline) {
  const auto base = std::find_if(results.begin(), results.end(),
                                 [&](const auto &p) { return p.first == baseline; });
  if (base == results.end())
    Fail(ErrorKind::kData, "report: baseline condition '", baseline, "' is missing");
  std::set<std::string> seen;
  for (const auto &p : results)
    if (!seen.insert(p.first).second)
      Fail(ErrorKind::kData, "report: condition '", p.first, "' appears twice");

  std::vector<std::pair<std::string, double>> ordered;
  for (const std::string &c : ConditionOrder())
    for (const auto &p : results)
      if (p.first == c) ordered.push_back(p);
  for (const auto &p : results)
    if (std::find(ConditionOrder().begin(), ConditionOrder().end(), p.first) ==
        ConditionOrder().end())
      ordered.push_back(p);
  // A baseline outside the canonical list still leads the table.
  std::stable_partition(ordered.begin(), ordered.end(),
                        [&](const auto &p) { return p.first == baseline; });

  ExperimentReport report;
  report.baseline = baseline;
  for (const auto &[cond, wer] : ordered) {
    ReportRow row{cond, wer, std::nullopt};
    if (cond != baseline) row.relative_improvement = RelativeImprovement(base->second, wer);
    report.rows.push_back(row);
  }
  return report;
}

namespace {

std::string Pad(const std::string &s, size_t width, bool left) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ')
              : std::string(width - s.size(), ' ') + s;
}

std::string RiText(const ReportRow &row) {
  if (!row.relative_improvement) return "-";
  return FormatFixed(RoundHalfAway(*row.relative_improvement, 1), 1);
}

}  // namespace

std::string RenderReport(const ExperimentReport &report) {
  size_t width = 9;
  for (const ReportRow &r : report.rows) width = std::max(width, r.condition.size());
  std::string out = Pad("condition", width, true) + "  " + Pad("WER", 8, false) + "  " +
                    Pad("%RI", 7, false) + "\n";
  out += std::string(width + 19, '-') + "\n";
  for (const ReportRow &r : report.rows)
    out += Pad(r.condition, width, true) + "  " + Pad(FormatFixed(r.wer, 2), 8, false) +
           "  " + Pad(RiText(r), 7, false) + "\n";
  out += "baseline: " + report.baseline + "\n";
  return out;
}

std::string FormatReportRecords(const ExperimentReport &report) {
  std::string out;
  for (const ReportRow &r : report.rows)
    out += "condition=" + r.condition + "\twer=" + FormatDouble(r.wer) + "\tri=" + RiText(r) +
           "\n";
  return out;
}

std::vector<std::pair<std::string, double>> ParseWerRecords(const std::string &text,
                                                            const std::string &origin) {
  std::vector<std::pair<std::string, double>> out;
  int line_no = 0;
  for (const std::string &line : SplitString(text, '\n', false)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::string cond, wer;
    for (const std::string &field : SplitString(line, '\t')) {
      const size_t eq = field.find('=');
      if (eq == std::string::npos)
        Fail(ErrorKind::kData, origin, ":", line_no, ": malformed field '", field, "'");
      const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
      if (key == "condition") cond = value;
      else if (key == "wer") wer = value;
    }
    if (cond.empty() || wer.empty())
      Fail(ErrorKind::kData, origin, ":", line_no, ": needs condition= and wer= fields");
    out.emplace_back(cond, ParseDouble(wer, "wer"));
  }
  return out;
}

}  // namespace sstk
