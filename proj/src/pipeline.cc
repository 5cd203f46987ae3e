// pipeline.cc

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

#include "sstk/pipeline.h"

#include <algorithm>
#include <chrono>
#include <set>

#include "sstk/common.h"
#include "sstk/decode.h"
#include "sstk/lm.h"
#include "sstk/log.h"
#include "sstk/sst.h"

namespace sstk {

namespace fs = std::filesystem;

const std::vector<std::string> &PhaseNames() {
  static const std::vector<std::string> names = {
      "prepare",          "baseline",           "lm",
      "sst_ood_only",     "sst_pooled",         "fine_tune_ood_only",
      "fine_tune_pooled", "transfer",           "evaluate",
      "report"};
  return names;
}

std::vector<std::string> PhaseDependencies(const ExperimentConfig &cfg,
                                           const std::string &phase) {
  if (phase == "prepare") return {};
  if (phase == "baseline" || phase == "lm" || phase == "transfer") return {"prepare"};
  if (phase == "sst_ood_only" || phase == "sst_pooled") return {"prepare", "baseline"};
  if (phase == "fine_tune_ood_only") return {"prepare", "sst_ood_only"};
  if (phase == "fine_tune_pooled") return {"prepare", "sst_pooled"};
  if (phase == "evaluate") {
    std::vector<std::string> deps = {"prepare",          "lm",
                                     "baseline",         "sst_ood_only",
                                     "fine_tune_ood_only", "sst_pooled",
                                     "fine_tune_pooled"};
    if (cfg.transfer.enabled) deps.push_back("transfer");
    return deps;
  }
  if (phase == "report") return {"evaluate"};
  Fail(ErrorKind::kConfig, "unknown phase '", phase, "' (expected one of ",
       Join(PhaseNames(), ", "), ")");
}

fs::path PhaseDir(const ExperimentConfig &cfg, const std::string &phase) {
  return fs::path(cfg.out_dir) / phase;
}

bool PhaseComplete(const ExperimentConfig &cfg, const std::string &phase) {
  return fs::exists(PhaseDir(cfg, phase) / "DONE");
}

uint64_t PhaseSeed(const ExperimentConfig &cfg, const std::string &phase) {
  return DeriveSeed(cfg.seed, "phase:" + phase);
}

std::vector<std::pair<std::string, fs::path>> ConditionModels(const ExperimentConfig &cfg) {
  std::vector<std::pair<std::string, fs::path>> out = {
      {"baseline", PhaseDir(cfg, "baseline") / "model.bin"},
      {"ood_only", PhaseDir(cfg, "sst_ood_only") / "model.bin"},
      {"ood_only+ft", PhaseDir(cfg, "fine_tune_ood_only") / "model.bin"},
      {"pooled", PhaseDir(cfg, "sst_pooled") / "model.bin"},
      {"pooled+ft", PhaseDir(cfg, "fine_tune_pooled") / "model.bin"},
  };
  if (cfg.transfer.enabled) out.push_back({"transfer", PhaseDir(cfg, "transfer") / "model.bin"});
  return out;
}

namespace {

std::vector<Sentence> Transcripts(const Manifest &m) {
  std::vector<Sentence> out;
  for (const UtteranceRecord &r : m.records())
    if (r.transcript && !r.transcript->empty()) out.push_back(*r.transcript);
  return out;
}

std::vector<int> ReadLabels(const fs::path &path) {
  return ParseIntList(ReadTextFile(path), "labels");
}

// Records of `perturbed` derived from the utterances of `originals`.
Manifest PerturbedSubset(const Manifest &perturbed, const Manifest &originals,
                         const std::string &name) {
  std::vector<UtteranceRecord> out;
  for (const UtteranceRecord &r : perturbed.records()) {
    const size_t sp = r.id.rfind("-sp");
    if (sp != std::string::npos && originals.Find(r.id.substr(0, sp))) out.push_back(r);
  }
  return Manifest(name, std::move(out));
}

void RequireGold(const Manifest &m, const std::string &what) {
  for (const UtteranceRecord &r : m.records())
    if (r.label_source != LabelSource::kGold)
      Fail(ErrorKind::kPhase, what, ": record ", r.id, " is not gold-labelled");
}

std::string Lineage(const AcousticModel &parent, const AcousticModel &model,
                    const Manifest &train) {
  return Concat("parent_model=", ModelDigest(parent), "\nmodel=", ModelDigest(model),
                "\ntrain_manifest=", train.name(), "\ntrain_manifest_digest=",
                ManifestDigest(train), "\nlabel_sources=",
                ProvenanceValue(model, "label_sources"), "\n");
}

class Runner {
 public:
  explicit Runner(const ExperimentConfig &cfg) : cfg_(cfg), features_(cfg.mfcc) {}

  bool Run(const std::string &phase) {
    const std::vector<std::string> deps = PhaseDependencies(cfg_, phase);
    if (PhaseComplete(cfg_, phase)) {
      SSTK_LOG << "phase " << phase << ": already complete";
      return false;
    }
    for (const std::string &d : deps)
      if (!PhaseComplete(cfg_, d))
        Fail(ErrorKind::kPhase, "phase ", phase, " needs completed phase '", d,
             "'; run it first");
    const fs::path dir = PhaseDir(cfg_, phase);
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto start = std::chrono::steady_clock::now();
    SSTK_LOG << "phase " << phase << ": start";
    try {
      Dispatch(phase, dir);
    } catch (const Error &e) {
      const ErrorKind kind = e.kind() == ErrorKind::kData ? ErrorKind::kData : ErrorKind::kPhase;
      throw Error(kind, Concat("phase ", phase, " failed: ", e.what()));
    } catch (const std::exception &e) {
      throw Error(ErrorKind::kPhase, Concat("phase ", phase, " failed: ", e.what()));
    }
    WriteTextFileAtomic(dir / "DONE", phase + "\n");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    SSTK_LOG << "phase " << phase << ": done in " << FormatFixed(secs, 1) << " s";
    return true;
  }

 private:
  fs::path Prep() const { return PhaseDir(cfg_, "prepare"); }
  Manifest Load(const std::string &name) const {
    return Manifest::Read(Prep() / (name + ".manifest"));
  }

  void Dispatch(const std::string &phase, const fs::path &dir) {
    if (phase == "prepare") Prepare(dir);
    else if (phase == "baseline") Baseline(dir);
    else if (phase == "lm") BuildLm(dir);
    else if (phase == "sst_ood_only") Sst(dir, SstStrategy::kOodOnly);
    else if (phase == "sst_pooled") Sst(dir, SstStrategy::kPooled);
    else if (phase == "fine_tune_ood_only") FineTune(dir, "sst_ood_only");
    else if (phase == "fine_tune_pooled") FineTune(dir, "sst_pooled");
    else if (phase == "transfer") Transfer(dir);
    else if (phase == "evaluate") Evaluate(dir);
    else if (phase == "report") Report(dir);
  }

  void Prepare(const fs::path &dir) {
    Manifest train, dev, test, ood;
    std::vector<int> labels;
    std::vector<Sentence> in_text, ood_text;
    if (cfg_.corpus.train_manifest.empty()) {
      SynthSpec spec = cfg_.corpus.synth;
      spec.seed = DeriveSeed(cfg_.seed, "corpus");
      spec.frame_length_s = cfg_.mfcc.frame_length;
      spec.frame_shift_s = cfg_.mfcc.frame_shift;
      train = GenerateCorpus(spec, cfg_.corpus.n_train, Domain::kInDomain, dir / "audio", "train");
      dev = GenerateCorpus(spec, cfg_.corpus.n_dev, Domain::kInDomain, dir / "audio", "dev");
      test = GenerateCorpus(spec, cfg_.corpus.n_test, Domain::kInDomain, dir / "audio", "test");
      ood = GenerateCorpus(spec, cfg_.corpus.n_ood, Domain::kOutOfDomain, dir / "audio", "ood");
      for (int k = 0; k <= spec.vocabulary_size; ++k) labels.push_back(k);
      in_text = GenerateSentences(spec, cfg_.lm.in_domain_sentences,
                                  DeriveSeed(cfg_.seed, "lm:in-domain"));
      // Out-of-domain text follows a different word grammar.
      SynthSpec other = spec;
      other.seed = DeriveSeed(cfg_.seed, "lm:ood-grammar");
      ood_text = GenerateSentences(other, cfg_.lm.out_of_domain_sentences,
                                   DeriveSeed(cfg_.seed, "lm:out-of-domain"));
    } else {
      train = Manifest::Read(cfg_.corpus.train_manifest);
      dev = Manifest::Read(cfg_.corpus.dev_manifest);
      test = Manifest::Read(cfg_.corpus.test_manifest);
      ood = Manifest::Read(cfg_.corpus.ood_manifest);
      std::set<int> seen = {kSilenceLabel};
      for (const Manifest *m : {&train, &ood})
        for (const UtteranceRecord &r : m->records())
          if (r.frame_labels) seen.insert(r.frame_labels->begin(), r.frame_labels->end());
      labels.assign(seen.begin(), seen.end());
      ood_text = Transcripts(ood);
    }
    for (const Manifest *m : {&train, &dev, &test}) {
      for (const UtteranceRecord &r : m->records())
        if (!r.transcript || !r.frame_labels || r.label_source != LabelSource::kGold)
          Fail(ErrorKind::kData, "prepare: in-domain record ", r.id,
               " needs gold transcript and frame labels");
    }
    for (const UtteranceRecord &r : ood.records())
      if (!r.frame_labels)
        Fail(ErrorKind::kData, "prepare: out-of-domain record ", r.id,
             " needs gold frame labels (used by the transfer source model and as hidden reference)");

    Manifest train_sp = SpeedPerturbManifest(train, cfg_.perturb_factors, dir / "audio-sp", cfg_.mfcc);
    Manifest ood_sp = SpeedPerturbManifest(ood, cfg_.perturb_factors, dir / "audio-sp", cfg_.mfcc);
    train_sp = Manifest("train-sp", train_sp.records());
    ood_sp = Manifest("ood-sp", ood_sp.records());
    Manifest unlabeled = StripLabels(ood_sp, "ood-unlabeled");

    train = Manifest("train", train.records());
    dev = Manifest("dev", dev.records());
    test = Manifest("test", test.records());
    ood = Manifest("ood", ood.records());
    for (const Manifest *m : {&train, &dev, &test, &ood, &train_sp, &ood_sp, &unlabeled})
      m->Write(dir / (m->name() + ".manifest"));

    std::vector<std::string> parts;
    for (int l : labels) parts.push_back(std::to_string(l));
    WriteTextFileAtomic(dir / "labels", Join(parts, " ") + "\n");

    std::vector<Sentence> lm_in = Transcripts(train);
    lm_in.insert(lm_in.end(), in_text.begin(), in_text.end());
    WriteSentences(lm_in, dir / "lm-in.txt");
    WriteSentences(ood_text, dir / "lm-ood.txt");
    WriteSentences(Transcripts(dev), dir / "lm-dev.txt");
  }

  AcousticModel FreshModel(uint64_t seed) {
    const std::vector<int> labels = ReadLabels(Prep() / "labels");
    return InitModel(features_.dim() * (2 * cfg_.context + 1), cfg_.hidden_dims, labels,
                     cfg_.context, seed);
  }

  void Baseline(const fs::path &dir) {
    const uint64_t seed = PhaseSeed(cfg_, "baseline");
    const Manifest train = Load("train-sp");
    RequireGold(train, "baseline");
    TrainResult r = Train(FreshModel(DeriveSeed(seed, "init")), train, features_,
                          cfg_.baseline.ToTrainConfig(TrainMode::kScratch, DeriveSeed(seed, "train")));
    SaveModel(r.model, dir / "model.bin");
    WriteTextFileAtomic(dir / "train.log", TrainLog(r));
  }

  static std::string TrainLog(const TrainResult &r) {
    std::string out;
    for (size_t e = 0; e < r.epoch_loss.size(); ++e)
      out += Concat("epoch ", e + 1, " loss ", FormatFixed(r.epoch_loss[e], 6), "\n");
    out += Concat("frames ", r.frames, "\nframe_accuracy ", FormatFixed(r.final_frame_accuracy, 6),
                  "\n");
    return out;
  }

  void BuildLm(const fs::path &dir) {
    std::vector<std::string> vocab;
    for (int l : ReadLabels(Prep() / "labels"))
      if (l != kSilenceLabel) vocab.push_back(LabelToken(l));
    std::vector<std::pair<std::string, fs::path>> sources = {
        {"in", Prep() / "lm-in.txt"}, {"ood", Prep() / "lm-ood.txt"}};
    for (size_t i = 0; i < cfg_.lm.extra_text.size(); ++i)
      sources.push_back({"extra-" + std::to_string(i + 1), cfg_.lm.extra_text[i]});

    std::vector<std::shared_ptr<const LanguageModel>> components;
    std::vector<fs::path> arpa_paths;
    for (const auto &[name, text_path] : sources) {
      std::vector<Sentence> text = ReadSentences(text_path);
      if (text.empty()) {
        SSTK_WARN << "lm: component '" << name << "' has no text; skipped";
        continue;
      }
      const fs::path arpa = dir / (name + ".arpa");
      WriteArpa(TrainLm(text, vocab, cfg_.lm.order), arpa);
      // Reload so decoding sees exactly the stored model.
      components.push_back(std::make_shared<NGramModel>(ReadArpa(arpa)));
      arpa_paths.push_back(arpa);
    }
    if (components.empty()) Fail(ErrorKind::kData, "lm: no component has any text");
    const std::vector<Sentence> dev = ReadSentences(Prep() / "lm-dev.txt");
    InterpolationFit fit = FitInterpolationWeights(components, dev, cfg_.lm.em_tolerance,
                                                   cfg_.lm.em_max_iterations);
    WriteMixture(arpa_paths, fit.weights, dir / "mixture.lm");
    std::string trace;
    for (size_t i = 0; i < fit.perplexity.size(); ++i)
      trace += Concat("iter ", i, " dev_ppl ", FormatFixed(fit.perplexity[i], 6), "\n");
    for (size_t i = 0; i < fit.weights.size(); ++i)
      trace += Concat("weight ", arpa_paths[i].filename().string(), " ",
                      FormatFixed(fit.weights[i], 6), "\n");
    WriteTextFileAtomic(dir / "em.txt", trace);
  }

  void Sst(const fs::path &dir, SstStrategy strategy) {
    const std::string phase = dir.filename().string();
    SstPlan plan;
    plan.strategy = strategy;
    plan.iterations = cfg_.sst_iterations;
    plan.perturb_factors.clear();  // the pool was perturbed in prepare
    plan.train_cfg = cfg_.sst.ToTrainConfig(TrainMode::kScratch, 0);
    plan.seed = PhaseSeed(cfg_, phase);
    const AcousticModel bootstrap = LoadModel(PhaseDir(cfg_, "baseline") / "model.bin");
    const Manifest gold = Load("train-sp");
    SstResult r = RunSst(bootstrap, gold, Load("ood-unlabeled"), plan, features_, cfg_.mfcc, dir);
    SaveModel(r.model, dir / "model.bin");
  }

  void FineTune(const fs::path &dir, const std::string &parent_phase) {
    const std::string phase = dir.filename().string();
    const AcousticModel parent = LoadModel(PhaseDir(cfg_, parent_phase) / "model.bin");
    const Manifest gold = Load("train-sp");
    RequireGold(gold, phase);
    TrainConfig tc;
    tc.mode = TrainMode::kFineTune;
    tc.base_learning_rate = cfg_.baseline.learning_rate;
    tc.fine_tune_lr_scale = cfg_.fine_tune.lr_scale;
    tc.epochs = cfg_.fine_tune.epochs;
    tc.batch_size = cfg_.fine_tune.batch_size;
    tc.l2 = cfg_.fine_tune.l2;
    tc.seed = PhaseSeed(cfg_, phase);
    TrainResult r = Train(parent, gold, features_, tc);
    SaveModel(r.model, dir / "model.bin");
    WriteTextFileAtomic(dir / "lineage", Lineage(parent, r.model, gold));
    WriteTextFileAtomic(dir / "train.log", TrainLog(r));
  }

  void Transfer(const fs::path &dir) {
    if (!cfg_.transfer.enabled) return;
    const uint64_t seed = PhaseSeed(cfg_, "transfer");
    const Manifest source_data = Load("ood-sp");
    RequireGold(source_data, "transfer source");
    TrainResult src = Train(FreshModel(DeriveSeed(seed, "source-init")), source_data, features_,
                            cfg_.transfer.source.ToTrainConfig(TrainMode::kScratch,
                                                               DeriveSeed(seed, "source-train")));
    SaveModel(src.model, dir / "source.bin");

    Manifest target = Load("train-sp");
    if (cfg_.transfer.gold_fraction < 1.0) {
      const double f = cfg_.transfer.gold_fraction;
      const std::vector<double> fractions = {f, 1.0 - f};
      Manifest subset = Split(Load("train"), fractions, DeriveSeed(seed, "subset"))[0];
      target = PerturbedSubset(target, subset, "train-sp.subset");
    }
    RequireGold(target, "transfer");
    AcousticModel init = TransferOutputLayer(src.model, ReadLabels(Prep() / "labels"),
                                             DeriveSeed(seed, "output-init"));
    TrainResult r = Train(init, target, features_,
                          cfg_.transfer.target.ToTrainConfig(TrainMode::kTransfer,
                                                             DeriveSeed(seed, "target-train")));
    SaveModel(r.model, dir / "model.bin");
    WriteTextFileAtomic(dir / "lineage", Lineage(src.model, r.model, target));
  }

  void Evaluate(const fs::path &dir) {
    const Manifest test = Load("test");
    std::shared_ptr<const LanguageModel> lm =
        LoadLanguageModel(PhaseDir(cfg_, "lm") / "mixture.lm");
    std::string records;
    for (const auto &[cond, path] : ConditionModels(cfg_)) {
      const AcousticModel model = LoadModel(path);
      std::string safe = cond;
      std::replace(safe.begin(), safe.end(), '+', '_');
      const fs::path hyp_path = dir / ("hyp-" + safe + ".txt");
      DecodeResult dec = DecodeManifest(model, test, features_, cfg_.decode, lm.get(), hyp_path);
      const WerResult w = CorpusWer(test, hyp_path);
      SSTK_LOG << "evaluate " << cond << ": WER " << FormatFixed(w.wer, 2);
      records += Concat("condition=", cond, "\twer=", FormatDouble(w.wer), "\tn_ref=",
                        w.n_ref_tokens, "\tsub=", w.substitutions, "\tins=", w.insertions,
                        "\tdel=", w.deletions, "\n");
    }
    WriteTextFileAtomic(dir / "wer.records", records);
  }

  void Report(const fs::path &dir) {
    const fs::path records = PhaseDir(cfg_, "evaluate") / "wer.records";
    ExperimentReport report =
        MakeReport(ParseWerRecords(ReadTextFile(records), records.string()));
    WriteTextFileAtomic(dir / "report.txt", RenderReport(report));
    WriteTextFileAtomic(dir / "report.records", FormatReportRecords(report));
  }

  const ExperimentConfig &cfg_;
  WavMfccSource features_;
};

}  // namespace

bool RunPhase(const ExperimentConfig &cfg, const std::string &phase) {
  cfg.Validate();
  PhaseDependencies(cfg, phase);
  Runner runner(cfg);
  return runner.Run(phase);
}

ExperimentReport RunExperiment(const ExperimentConfig &cfg) {
  cfg.Validate();
  fs::create_directories(cfg.out_dir);
  WriteTextFileAtomic(fs::path(cfg.out_dir) / "config.ini", FormatConfig(cfg));
  Runner runner(cfg);
  for (const std::string &phase : PhaseNames()) {
    if (phase == "transfer" && !cfg.transfer.enabled) continue;
    runner.Run(phase);
  }
  return ReadExperimentReport(cfg);
}

ExperimentReport ReadExperimentReport(const ExperimentConfig &cfg) {
  if (!PhaseComplete(cfg, "report"))
    Fail(ErrorKind::kPhase, "phase report has not completed");
  const fs::path records = PhaseDir(cfg, "evaluate") / "wer.records";
  return MakeReport(ParseWerRecords(ReadTextFile(records), records.string()));
}

}  // namespace sstk
