// c-api.cc

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

#include "sstk/sstk-c.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <set>
#include <string>

#include "sstk/acoustic.h"
#include "sstk/common.h"
#include "sstk/config.h"
#include "sstk/corpus.h"
#include "sstk/decode.h"
#include "sstk/dsp.h"
#include "sstk/eval.h"
#include "sstk/lm.h"
#include "sstk/log.h"
#include "sstk/pipeline.h"
#include "sstk/sst.h"

struct sstk_config {
  sstk::ExperimentConfig cfg;
};
struct sstk_manifest {
  sstk::Manifest m;
};
struct sstk_model {
  sstk::AcousticModel model;
};
struct sstk_lm {
  std::shared_ptr<const sstk::LanguageModel> lm;
};

namespace {

thread_local std::string last_error;

template <typename F>
sstk_status Guard(F &&f) {
  try {
    f();
    last_error.clear();
    return SSTK_OK;
  } catch (const sstk::Error &e) {
    last_error = e.what();
    return static_cast<sstk_status>(static_cast<int>(e.kind()));
  } catch (const std::bad_alloc &) {
    last_error = "out of memory";
  } catch (const std::exception &e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return SSTK_ERR_INTERNAL;
}

void Need(const void *p, const char *what) {
  if (!p) sstk::Fail(sstk::ErrorKind::kConfig, what, " must not be null");
}

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<int> InventoryOf(const sstk::Manifest &m) {
  std::set<int> seen = {sstk::kSilenceLabel};
  for (const sstk::UtteranceRecord &r : m.records())
    if (r.frame_labels) seen.insert(r.frame_labels->begin(), r.frame_labels->end());
  return {seen.begin(), seen.end()};
}

}  // namespace

extern "C" {

const char *sstk_last_error(void) { return last_error.c_str(); }

void sstk_string_free(char *s) { std::free(s); }

void sstk_set_log_level(int level) {
  if (level < 0) level = 0;
  if (level > 3) level = 3;
  sstk::SetLogLevel(static_cast<sstk::LogLevel>(level));
}

const char *sstk_version(void) { return "1.0.0"; }

sstk_status sstk_config_new(const char *path, sstk_config **out) {
  return Guard([&] {
    Need(out, "out");
    auto c = std::make_unique<sstk_config>();
    if (path && *path) {
      if (!std::filesystem::exists(path))
        sstk::Fail(sstk::ErrorKind::kConfig, "config file ", path, " does not exist");
      for (const auto &[k, v] : sstk::ReadIni(path)) sstk::SetConfigValue(&c->cfg, k, v);
    }
    *out = c.release();
  });
}

void sstk_config_free(sstk_config *cfg) { delete cfg; }

sstk_status sstk_config_set(sstk_config *cfg, const char *key, const char *value) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(key, "key");
    Need(value, "value");
    sstk::SetConfigValue(&cfg->cfg, key, value);
  });
}

sstk_status sstk_config_get(const sstk_config *cfg, const char *key, char **value) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(key, "key");
    Need(value, "value");
    *value = Dup(sstk::GetConfigValue(cfg->cfg, key));
  });
}

int sstk_config_has_key(const char *key) {
  if (!key) return 0;
  for (const std::string &k : sstk::ConfigKeys())
    if (k == key) return 1;
  return 0;
}

sstk_status sstk_config_finalize(sstk_config *cfg) {
  return Guard([&] {
    Need(cfg, "cfg");
    sstk::FinalizeConfig(&cfg->cfg);
  });
}

sstk_status sstk_config_format(const sstk_config *cfg, char **text) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(text, "text");
    *text = Dup(sstk::FormatConfig(cfg->cfg));
  });
}

sstk_status sstk_manifest_read(const char *path, sstk_manifest **out) {
  return Guard([&] {
    Need(path, "path");
    Need(out, "out");
    *out = new sstk_manifest{sstk::Manifest::Read(path)};
  });
}

sstk_status sstk_manifest_write(const sstk_manifest *m, const char *path) {
  return Guard([&] {
    Need(m, "manifest");
    Need(path, "path");
    m->m.Write(path);
  });
}

size_t sstk_manifest_size(const sstk_manifest *m) { return m ? m->m.size() : 0; }

void sstk_manifest_free(sstk_manifest *m) { delete m; }

sstk_status sstk_synth(const sstk_config *cfg, int n, const char *domain, const char *out_dir,
                       const char *prefix, sstk_manifest **out) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(domain, "domain");
    Need(out_dir, "out_dir");
    Need(prefix, "prefix");
    Need(out, "out");
    sstk::SynthSpec spec = cfg->cfg.corpus.synth;
    spec.seed = sstk::DeriveSeed(cfg->cfg.seed, "corpus");
    spec.frame_length_s = cfg->cfg.mfcc.frame_length;
    spec.frame_shift_s = cfg->cfg.mfcc.frame_shift;
    const sstk::Domain d = sstk::ParseDomain(domain);
    *out = new sstk_manifest{sstk::GenerateCorpus(spec, n, d, out_dir, prefix)};
  });
}

sstk_status sstk_perturb(const sstk_config *cfg, const sstk_manifest *in, const char *audio_dir,
                         sstk_manifest **out) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(in, "manifest");
    Need(audio_dir, "audio_dir");
    Need(out, "out");
    *out = new sstk_manifest{sstk::SpeedPerturbManifest(in->m, cfg->cfg.perturb_factors,
                                                        audio_dir, cfg->cfg.mfcc)};
  });
}

sstk_status sstk_model_load(const char *path, sstk_model **out) {
  return Guard([&] {
    Need(path, "path");
    Need(out, "out");
    *out = new sstk_model{sstk::LoadModel(path)};
  });
}

sstk_status sstk_model_save(const sstk_model *model, const char *path) {
  return Guard([&] {
    Need(model, "model");
    Need(path, "path");
    sstk::SaveModel(model->model, path);
  });
}

void sstk_model_free(sstk_model *model) { delete model; }

sstk_status sstk_model_digest(const sstk_model *model, char **digest) {
  return Guard([&] {
    Need(model, "model");
    Need(digest, "digest");
    *digest = Dup(sstk::ModelDigest(model->model));
  });
}

sstk_status sstk_model_provenance(const sstk_model *model, char **provenance) {
  return Guard([&] {
    Need(model, "model");
    Need(provenance, "provenance");
    *provenance = Dup(model->model.provenance);
  });
}

sstk_status sstk_train(const sstk_config *cfg, const sstk_manifest *data, uint64_t seed,
                       sstk_model **out) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(data, "manifest");
    Need(out, "out");
    const sstk::ExperimentConfig &c = cfg->cfg;
    sstk::WavMfccSource features(c.mfcc);
    sstk::AcousticModel init =
        sstk::InitModel(features.dim() * (2 * c.context + 1), c.hidden_dims,
                        InventoryOf(data->m), c.context, sstk::DeriveSeed(seed, "init"));
    sstk::TrainResult r =
        sstk::Train(init, data->m, features,
                    c.baseline.ToTrainConfig(sstk::TrainMode::kScratch,
                                             sstk::DeriveSeed(seed, "train")));
    *out = new sstk_model{std::move(r.model)};
  });
}

sstk_status sstk_finetune(const sstk_config *cfg, const sstk_model *parent,
                          const sstk_manifest *data, uint64_t seed, sstk_model **out) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(parent, "parent model");
    Need(data, "manifest");
    Need(out, "out");
    const sstk::ExperimentConfig &c = cfg->cfg;
    sstk::WavMfccSource features(c.mfcc);
    sstk::TrainConfig tc;
    tc.mode = sstk::TrainMode::kFineTune;
    tc.base_learning_rate = c.baseline.learning_rate;
    tc.fine_tune_lr_scale = c.fine_tune.lr_scale;
    tc.epochs = c.fine_tune.epochs;
    tc.batch_size = c.fine_tune.batch_size;
    tc.l2 = c.fine_tune.l2;
    tc.seed = seed;
    *out = new sstk_model{sstk::Train(parent->model, data->m, features, tc).model};
  });
}

sstk_status sstk_transfer(const sstk_config *cfg, const sstk_model *source,
                          const sstk_manifest *data, uint64_t seed, sstk_model **out) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(source, "source model");
    Need(data, "manifest");
    Need(out, "out");
    const sstk::ExperimentConfig &c = cfg->cfg;
    sstk::WavMfccSource features(c.mfcc);
    sstk::AcousticModel init = sstk::TransferOutputLayer(source->model, InventoryOf(data->m),
                                                         sstk::DeriveSeed(seed, "output-init"));
    sstk::TrainResult r = sstk::Train(
        init, data->m, features,
        c.transfer.target.ToTrainConfig(sstk::TrainMode::kTransfer, sstk::DeriveSeed(seed, "train")));
    *out = new sstk_model{std::move(r.model)};
  });
}

sstk_status sstk_decode(const sstk_config *cfg, const sstk_model *model,
                        const sstk_manifest *data, const sstk_lm *lm, const char *hyp_path,
                        size_t *n_failed) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(model, "model");
    Need(data, "manifest");
    Need(hyp_path, "hyp_path");
    sstk::WavMfccSource features(cfg->cfg.mfcc);
    sstk::DecodeResult r = sstk::DecodeManifest(model->model, data->m, features, cfg->cfg.decode,
                                                lm ? lm->lm.get() : nullptr, hyp_path);
    if (n_failed) *n_failed = r.failed_ids.size();
  });
}

sstk_status sstk_pseudo_label(const sstk_config *cfg, const sstk_model *model,
                              const sstk_manifest *data, sstk_manifest **out) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(model, "model");
    Need(data, "manifest");
    Need(out, "out");
    sstk::WavMfccSource features(cfg->cfg.mfcc);
    sstk::PseudoLabelResult r =
        sstk::PseudoLabel(model->model, data->m, features, data->m.name() + ".pseudo");
    if (!r.failed_ids.empty())
      SSTK_WARN << r.failed_ids.size() << " utterances could not be decoded";
    *out = new sstk_manifest{std::move(r.manifest)};
  });
}

sstk_status sstk_select(const sstk_manifest *labeled, sstk_manifest **selected,
                        sstk_manifest **rejected, char **report) {
  return Guard([&] {
    Need(labeled, "manifest");
    sstk::Selection s = sstk::SelectByMedian(labeled->m);
    if (report) *report = Dup(sstk::FormatSelectionReport(s.report));
    if (selected) *selected = new sstk_manifest{std::move(s.selected)};
    if (rejected) *rejected = new sstk_manifest{std::move(s.rejected)};
  });
}

sstk_status sstk_sst(const sstk_config *cfg, const sstk_model *bootstrap,
                     const sstk_manifest *in_domain, const sstk_manifest *unlabeled,
                     const char *strategy, const char *out_dir, sstk_model **out) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(bootstrap, "bootstrap model");
    Need(unlabeled, "unlabeled manifest");
    Need(strategy, "strategy");
    Need(out_dir, "out_dir");
    Need(out, "out");
    const sstk::ExperimentConfig &c = cfg->cfg;
    sstk::SstPlan plan;
    plan.strategy = sstk::ParseSstStrategy(strategy);
    plan.iterations = c.sst_iterations;
    plan.perturb_factors = c.perturb_factors;
    plan.train_cfg = c.sst.ToTrainConfig(sstk::TrainMode::kScratch, 0);
    plan.seed = sstk::DeriveSeed(c.seed, std::string("sst:") + strategy);
    sstk::WavMfccSource features(c.mfcc);
    sstk::Manifest gold = in_domain ? in_domain->m : sstk::Manifest();
    sstk::SstResult r = sstk::RunSst(bootstrap->model, gold, unlabeled->m, plan, features,
                                     c.mfcc, out_dir);
    *out = new sstk_model{std::move(r.model)};
  });
}

sstk_status sstk_lm_train(const char *text_path, int order, const char *arpa_path) {
  return Guard([&] {
    Need(text_path, "text_path");
    Need(arpa_path, "arpa_path");
    std::vector<sstk::Sentence> text = sstk::ReadSentences(text_path);
    sstk::WriteArpa(sstk::TrainLm(text, {}, order), arpa_path);
  });
}

sstk_status sstk_lm_interp(const char *const *arpa_paths, size_t n, const char *dev_text_path,
                           const char *mixture_path, char **weights) {
  return Guard([&] {
    Need(arpa_paths, "arpa_paths");
    Need(dev_text_path, "dev_text_path");
    Need(mixture_path, "mixture_path");
    if (n == 0) sstk::Fail(sstk::ErrorKind::kConfig, "lm-interp: no component LMs given");
    std::vector<std::shared_ptr<const sstk::LanguageModel>> comps;
    std::vector<std::filesystem::path> paths;
    for (size_t i = 0; i < n; ++i) {
      Need(arpa_paths[i], "arpa path");
      paths.push_back(std::filesystem::absolute(arpa_paths[i]));
      comps.push_back(std::make_shared<sstk::NGramModel>(sstk::ReadArpa(arpa_paths[i])));
    }
    sstk::InterpolationFit fit =
        sstk::FitInterpolationWeights(comps, sstk::ReadSentences(dev_text_path));
    sstk::WriteMixture(paths, fit.weights, mixture_path);
    if (weights) {
      std::string text;
      for (size_t i = 0; i < n; ++i)
        text += sstk::FormatFixed(fit.weights[i], 6) + "\t" + paths[i].string() + "\n";
      text += "dev_perplexity\t" + sstk::FormatFixed(fit.perplexity.back(), 4) + "\n";
      *weights = Dup(text);
    }
  });
}

sstk_status sstk_lm_load(const char *path, sstk_lm **out) {
  return Guard([&] {
    Need(path, "path");
    Need(out, "out");
    *out = new sstk_lm{sstk::LoadLanguageModel(path)};
  });
}

void sstk_lm_free(sstk_lm *lm) { delete lm; }

sstk_status sstk_lm_perplexity(const sstk_lm *lm, const char *text_path, double *ppl) {
  return Guard([&] {
    Need(lm, "lm");
    Need(text_path, "text_path");
    Need(ppl, "ppl");
    *ppl = sstk::Perplexity(*lm->lm, sstk::ReadSentences(text_path));
  });
}

sstk_status sstk_score(const sstk_manifest *refs, const char *hyp_path, double *wer,
                       char **summary) {
  return Guard([&] {
    Need(refs, "reference manifest");
    Need(hyp_path, "hyp_path");
    const sstk::WerResult w = sstk::CorpusWer(refs->m, std::filesystem::path(hyp_path));
    if (wer) *wer = w.wer;
    if (summary)
      *summary = Dup(sstk::Concat("wer ", w.infinite ? std::string("inf") : sstk::FormatFixed(w.wer, 2),
                                  "\nn_ref ", w.n_ref_tokens, "\nsub ", w.substitutions, "\nins ",
                                  w.insertions, "\ndel ", w.deletions, "\n"));
  });
}

sstk_status sstk_report(const char *records_path, const char *baseline, char **table) {
  return Guard([&] {
    Need(records_path, "records_path");
    Need(table, "table");
    const std::string text = sstk::ReadTextFile(records_path);
    sstk::ExperimentReport r = sstk::MakeReport(sstk::ParseWerRecords(text, records_path),
                                                baseline && *baseline ? baseline : "baseline");
    *table = Dup(sstk::RenderReport(r));
  });
}

sstk_status sstk_experiment(const sstk_config *cfg, char **table) {
  return Guard([&] {
    Need(cfg, "cfg");
    sstk::ExperimentReport r = sstk::RunExperiment(cfg->cfg);
    if (table) *table = Dup(sstk::RenderReport(r));
  });
}

sstk_status sstk_run_phase(const sstk_config *cfg, const char *phase) {
  return Guard([&] {
    Need(cfg, "cfg");
    Need(phase, "phase");
    sstk::RunPhase(cfg->cfg, phase);
  });
}

}  // extern "C"
