// sst.cc

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

#include "sstk/sst.h"

#include <algorithm>

#include "sstk/common.h"
#include "sstk/log.h"

namespace sstk {

double SampleMedian(std::vector<double> values) {
  if (values.empty()) Fail(ErrorKind::kData, "median of an empty set");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Selection SelectByMedian(const Manifest &labeled) {
  Selection sel;
  sel.report.n_candidates = labeled.size();
  if (labeled.empty()) {
    sel.selected = Manifest(labeled.name() + ".selected", {});
    sel.rejected = Manifest(labeled.name() + ".rejected", {});
    return sel;
  }
  std::vector<double> conf;
  conf.reserve(labeled.size());
  for (const UtteranceRecord &r : labeled.records()) {
    if (!r.confidence)
      Fail(ErrorKind::kData, "select: record ", r.id, " has no confidence");
    conf.push_back(*r.confidence);
  }
  const double median = SampleMedian(conf);
  std::vector<UtteranceRecord> keep, drop;
  for (const UtteranceRecord &r : labeled.records()) {
    if (*r.confidence >= median) {
      keep.push_back(r);
      sel.report.selected_ids.push_back(r.id);
    } else {
      drop.push_back(r);
      sel.report.rejected_ids.push_back(r.id);
    }
  }
  sel.report.median_confidence = median;
  sel.report.n_selected = keep.size();
  sel.selected = Manifest(labeled.name() + ".selected", std::move(keep));
  sel.rejected = Manifest(labeled.name() + ".rejected", std::move(drop));
  return sel;
}

std::string FormatSelectionReport(const SelectionReport &r) {
  return Concat("n_candidates ", r.n_candidates, "\nmedian ",
                FormatDouble(r.median_confidence), "\nn_selected ", r.n_selected,
                "\n");
}

PseudoLabelResult PseudoLabel(const AcousticModel &model, const Manifest &unlabeled,
                              FeatureSource &features, const std::string &name) {
  PseudoLabelResult out;
  DecodeResult dec = DecodeManifest(model, unlabeled, features, DecoderConfig{}, nullptr);
  std::vector<UtteranceRecord> records;
  size_t h = 0;
  for (const UtteranceRecord &src : unlabeled.records()) {
    if (h >= dec.hypotheses.size() || dec.hypotheses[h].utterance_id != src.id) continue;
    const Hypothesis &hyp = dec.hypotheses[h++];
    UtteranceRecord r = src;
    r.transcript = hyp.tokens;
    r.frame_labels = hyp.frame_label_path;
    r.confidence = hyp.mean_confidence;
    r.label_source = LabelSource::kPseudo;
    records.push_back(std::move(r));
  }
  out.manifest = Manifest(name, std::move(records));
  out.hypotheses = std::move(dec.hypotheses);
  out.failed_ids = std::move(dec.failed_ids);
  return out;
}

const char *SstStrategyName(SstStrategy s) {
  return s == SstStrategy::kOodOnly ? "ood_only" : "pooled";
}

SstStrategy ParseSstStrategy(const std::string &s) {
  if (s == "ood_only") return SstStrategy::kOodOnly;
  if (s == "pooled") return SstStrategy::kPooled;
  Fail(ErrorKind::kConfig, "unknown SST strategy '", s, "' (expected ood_only or pooled)");
}

void SstPlan::Validate() const {
  if (iterations < 1) Fail(ErrorKind::kConfig, "sst: iterations must be >= 1");
  for (double f : perturb_factors)
    if (!(f > 0.0)) Fail(ErrorKind::kConfig, "sst: perturbation factors must be > 0");
  train_cfg.Validate();
}

namespace {

namespace fs = std::filesystem;

SelectionReport ReadStageReport(const fs::path &dir) {
  SelectionReport r;
  for (const std::string &line : SplitString(ReadTextFile(dir / "report"), '\n')) {
    std::vector<std::string> kv = SplitString(line, ' ');
    if (kv.size() != 2) continue;
    if (kv[0] == "n_candidates") r.n_candidates = ParseInt(kv[1], "n_candidates");
    else if (kv[0] == "median") r.median_confidence = ParseDouble(kv[1], "median");
    else if (kv[0] == "n_selected") r.n_selected = ParseInt(kv[1], "n_selected");
  }
  const Manifest selected = Manifest::Read(dir / "selected.manifest");
  const Manifest rejected = Manifest::Read(dir / "rejected.manifest");
  for (const UtteranceRecord &rec : selected.records()) r.selected_ids.push_back(rec.id);
  for (const UtteranceRecord &rec : rejected.records()) r.rejected_ids.push_back(rec.id);
  return r;
}

}  // namespace

SstResult RunSst(const AcousticModel &bootstrap, const Manifest &in_domain,
                 const Manifest &unlabeled_ood, const SstPlan &plan,
                 FeatureSource &features, const MfccConfig &framing,
                 const fs::path &out_dir) {
  plan.Validate();
  bootstrap.Validate();
  if (plan.strategy == SstStrategy::kPooled && in_domain.empty())
    Fail(ErrorKind::kConfig, "sst: the pooled strategy needs an in-domain gold manifest");
  fs::create_directories(out_dir);

  // Perturbed pool, shared by every iteration.
  Manifest pool;
  if (plan.perturb_factors.empty()) {
    pool = StripLabels(unlabeled_ood, unlabeled_ood.name());
  } else {
    const fs::path pool_path = out_dir / "perturbed" / "pool.manifest";
    if (fs::exists(pool_path)) {
      pool = Manifest::Read(pool_path);
    } else {
      Manifest stripped = StripLabels(unlabeled_ood, unlabeled_ood.name());
      pool = SpeedPerturbManifest(stripped, plan.perturb_factors,
                                  out_dir / "perturbed", framing);
      pool.Write(pool_path);
    }
  }

  SstResult result;
  AcousticModel current = bootstrap;
  const std::vector<int> hidden = bootstrap.hidden_dims();
  for (int k = 1; k <= plan.iterations; ++k) {
    const std::string stage = "stage-" + std::to_string(k);
    const fs::path dir = out_dir / stage;
    SstStage info;
    info.iteration = k;
    info.dir = dir;
    if (fs::exists(dir / "model.bin")) {
      SSTK_LOG << "sst: reusing " << dir.string();
      current = LoadModel(dir / "model.bin");
      info.report = ReadStageReport(dir);
      result.stages.push_back(std::move(info));
      continue;
    }
    const fs::path tmp = out_dir / (stage + ".tmp");
    fs::remove_all(tmp);
    fs::remove_all(dir);
    fs::create_directories(tmp);

    PseudoLabelResult labeled = PseudoLabel(current, pool, features, stage + ".pseudo");
    if (!labeled.failed_ids.empty())
      SSTK_WARN << "sst " << stage << ": " << labeled.failed_ids.size()
                << " utterances could not be decoded";
    Selection sel = SelectByMedian(labeled.manifest);
    if (sel.selected.empty())
      Fail(ErrorKind::kPhase, "sst ", stage, ": selection is empty (",
           sel.report.n_candidates, " candidates)");
    SSTK_LOG << "sst " << stage << ": selected " << sel.report.n_selected << " of "
             << sel.report.n_candidates << ", median " << sel.report.median_confidence;

    Manifest train_set = sel.selected;
    if (plan.strategy == SstStrategy::kPooled)
      train_set = Pool(sel.selected, in_domain).manifest;
    train_set = Manifest(Concat(stage, ".", SstStrategyName(plan.strategy)),
                         train_set.records());

    AcousticModel init = InitModel(bootstrap.input_dim(), hidden, bootstrap.labels,
                                   bootstrap.context,
                                   DeriveSeed(plan.seed, stage + ":init"));
    TrainConfig cfg = plan.train_cfg;
    cfg.mode = TrainMode::kScratch;
    cfg.seed = DeriveSeed(plan.seed, stage + ":train");
    TrainResult trained = Train(init, train_set, features, cfg);

    SaveModel(trained.model, tmp / "model.bin");
    sel.selected.Write(tmp / "selected.manifest");
    sel.rejected.Write(tmp / "rejected.manifest");
    WriteHypotheses(labeled.hypotheses, tmp / "hypotheses.txt");
    WriteTextFileAtomic(tmp / "report", FormatSelectionReport(sel.report));
    fs::rename(tmp, dir);

    current = std::move(trained.model);
    info.report = std::move(sel.report);
    result.stages.push_back(std::move(info));
  }
  result.model = std::move(current);
  return result;
}

}  // namespace sstk
