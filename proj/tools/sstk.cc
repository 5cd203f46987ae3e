// sstk.cc

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

// Command-line front end. Talks to the library only through sstk-c.h.
//
// Usage: sstk <command> [options] [--config FILE] [--seed N] [--<section>.<key> VALUE]...
// Exit status: 0 ok, 1 usage/config, 2 phase failure, 3 data error.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sstk/sstk-c.h"

namespace {

struct Fail {
  sstk_status status;
};

void Check(sstk_status s) {
  if (s != SSTK_OK) throw Fail{s};
}

// Owning wrappers for the C handles.
template <typename T, void (*Free)(T *)>
class Handle {
 public:
  Handle() = default;
  ~Handle() {
    if (p_) Free(p_);
  }
  Handle(const Handle &) = delete;
  Handle &operator=(const Handle &) = delete;
  T **out() { return &p_; }
  T *get() const { return p_; }

 private:
  T *p_ = nullptr;
};

using Config = Handle<sstk_config, sstk_config_free>;
using ManifestH = Handle<sstk_manifest, sstk_manifest_free>;
using ModelH = Handle<sstk_model, sstk_model_free>;
using LmH = Handle<sstk_lm, sstk_lm_free>;

std::string Take(char *s) {
  std::string out = s ? s : "";
  sstk_string_free(s);
  return out;
}

struct Overrides {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> values;
  int verbosity = -1;
};

// Pulls --config, --seed, -v and every --section.key option out of argv;
// everything else goes to CLI11.
std::vector<std::string> SplitArgs(int argc, char **argv, Overrides *ov) {
  std::vector<std::string> rest;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    auto value = [&](const std::string &name) -> std::string {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "sstk: option %s needs a value\n", name.c_str());
        throw Fail{SSTK_ERR_CONFIG};
      }
      return argv[++i];
    };
    if (a.rfind("--", 0) == 0) {
      std::string name = a.substr(2), val;
      bool has_val = false;
      const size_t eq = name.find('=');
      if (eq != std::string::npos) {
        val = name.substr(eq + 1);
        name = name.substr(0, eq);
        has_val = true;
      }
      if (name == "config") {
        ov->config_path = has_val ? val : value(a);
        continue;
      }
      if (name == "seed") {
        ov->values.push_back({"experiment.seed", has_val ? val : value(a)});
        continue;
      }
      if (name.find('.') != std::string::npos) {
        if (!sstk_config_has_key(name.c_str())) {
          std::fprintf(stderr, "sstk: unknown configuration key '%s'\n", name.c_str());
          throw Fail{SSTK_ERR_CONFIG};
        }
        ov->values.push_back({name, has_val ? val : value(a)});
        continue;
      }
    }
    if (a == "-v" || a == "--verbose") {
      ov->verbosity = 2;
      continue;
    }
    if (a == "-vv") {
      ov->verbosity = 3;
      continue;
    }
    rest.push_back(a);
  }
  return rest;
}

void LoadConfig(const Overrides &ov, Config *cfg) {
  Check(sstk_config_new(ov.config_path.empty() ? nullptr : ov.config_path.c_str(), cfg->out()));
  for (const auto &[k, v] : ov.values) Check(sstk_config_set(cfg->get(), k.c_str(), v.c_str()));
  Check(sstk_config_finalize(cfg->get()));
}

uint64_t Seed(const Config &cfg) {
  char *s = nullptr;
  Check(sstk_config_get(cfg.get(), "experiment.seed", &s));
  return std::strtoull(Take(s).c_str(), nullptr, 10);
}

void ReadManifest(const std::string &path, ManifestH *m) {
  Check(sstk_manifest_read(path.c_str(), m->out()));
}

}  // namespace

int main(int argc, char **argv) {
  Overrides ov;
  std::vector<std::string> args;
  try {
    args = SplitArgs(argc, argv, &ov);
  } catch (const Fail &f) {
    return f.status;
  }

  CLI::App app{"sstk: semi-supervised acoustic model training toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sstk_version()));
  app.footer(
      "Global options (any position): --config FILE, --seed N, -v, and\n"
      "--<section>.<key> VALUE to override any configuration value.");

  std::string manifest, out, model, lm_path, hyp, text, dev, ref, records, baseline = "baseline";
  std::string domain = "in", out_dir, prefix, audio_dir, strategy = "ood_only", in_domain;
  std::string selected, rejected, report_path, phase;
  std::vector<std::string> lms;
  int n = 10, order = 3;
  bool greedy = false;

  auto *synth = app.add_subcommand("synth", "synthesise a corpus");
  synth->add_option("--n", n, "number of utterances")->required();
  synth->add_option("--domain", domain, "in or ood")->check(CLI::IsMember({"in", "ood"}));
  synth->add_option("--audio-dir", out_dir, "directory for the audio")->required();
  synth->add_option("--prefix", prefix, "utterance id prefix")->required();
  synth->add_option("--out", out, "output manifest")->required();

  auto *perturb = app.add_subcommand("perturb", "speed-perturb a manifest (perturb.factors)");
  perturb->add_option("--manifest", manifest)->required();
  perturb->add_option("--audio-dir", audio_dir)->required();
  perturb->add_option("--out", out, "output manifest")->required();

  auto *train = app.add_subcommand("train", "train a model from scratch ([baseline] settings)");
  train->add_option("--manifest", manifest)->required();
  train->add_option("--out", out, "output model")->required();

  auto *finetune = app.add_subcommand("finetune", "fine-tune a model ([fine_tune] settings)");
  finetune->add_option("--model", model)->required();
  finetune->add_option("--manifest", manifest)->required();
  finetune->add_option("--out", out)->required();

  auto *transfer = app.add_subcommand("transfer", "output-layer transfer then train");
  transfer->add_option("--model", model, "source model")->required();
  transfer->add_option("--manifest", manifest)->required();
  transfer->add_option("--out", out)->required();

  auto *decode = app.add_subcommand("decode", "decode a manifest to a hypothesis file");
  decode->add_option("--model", model)->required();
  decode->add_option("--manifest", manifest)->required();
  decode->add_option("--lm", lm_path, "ARPA or mixture file");
  decode->add_option("--out", out, "hypothesis file")->required();
  decode->add_flag("--greedy", greedy, "greedy decoding (no beam, no LM)");

  auto *select = app.add_subcommand("select", "median-confidence selection");
  select->add_option("--manifest", manifest, "pseudo-labelled manifest")->required();
  select->add_option("--model", model, "pseudo-label the manifest with this model first");
  select->add_option("--selected", selected)->required();
  select->add_option("--rejected", rejected);
  select->add_option("--report", report_path);

  auto *lm_train = app.add_subcommand("lm-train", "train a Witten-Bell n-gram LM");
  lm_train->add_option("--text", text, "one sentence per line")->required();
  lm_train->add_option("--order", order)->check(CLI::Range(1, 3));
  lm_train->add_option("--out", out, "ARPA file")->required();

  auto *lm_interp = app.add_subcommand("lm-interp", "fit mixture weights on dev text");
  lm_interp->add_option("--lm", lms, "component ARPA files")->required();
  lm_interp->add_option("--dev", dev)->required();
  lm_interp->add_option("--out", out, "mixture file")->required();

  auto *sst = app.add_subcommand("sst", "run semi-supervised training");
  sst->add_option("--model", model, "bootstrap model")->required();
  sst->add_option("--unlabeled", manifest)->required();
  sst->add_option("--in-domain", in_domain, "gold manifest (pooled)");
  sst->add_option("--strategy", strategy)->check(CLI::IsMember({"ood_only", "pooled"}));
  sst->add_option("--work-dir", out_dir)->required();
  sst->add_option("--out", out, "final model")->required();

  auto *score = app.add_subcommand("score", "corpus WER");
  score->add_option("--ref", ref, "reference manifest")->required();
  score->add_option("--hyp", hyp, "hypothesis file")->required();

  auto *report = app.add_subcommand("report", "render a WER report");
  report->add_option("--records", records, "condition=/wer= records")->required();
  report->add_option("--baseline", baseline);

  auto *experiment = app.add_subcommand("experiment", "run the full experiment");

  auto *phase_cmd = app.add_subcommand("phase", "run one pipeline phase");
  phase_cmd->add_option("name", phase)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return SSTK_ERR_CONFIG;
  }

  if (ov.verbosity >= 0) sstk_set_log_level(ov.verbosity);
  else sstk_set_log_level(experiment->parsed() || phase_cmd->parsed() ? 2 : 1);

  try {
    Config cfg;
    LoadConfig(ov, &cfg);
    const uint64_t seed = Seed(cfg);

    if (synth->parsed()) {
      ManifestH m;
      Check(sstk_synth(cfg.get(), n, domain.c_str(), out_dir.c_str(), prefix.c_str(), m.out()));
      Check(sstk_manifest_write(m.get(), out.c_str()));
    } else if (perturb->parsed()) {
      ManifestH in, m;
      ReadManifest(manifest, &in);
      Check(sstk_perturb(cfg.get(), in.get(), audio_dir.c_str(), m.out()));
      Check(sstk_manifest_write(m.get(), out.c_str()));
      std::printf("%zu -> %zu records\n", sstk_manifest_size(in.get()), sstk_manifest_size(m.get()));
    } else if (train->parsed() || finetune->parsed() || transfer->parsed()) {
      ManifestH data;
      ModelH parent, result;
      ReadManifest(manifest, &data);
      if (train->parsed()) {
        Check(sstk_train(cfg.get(), data.get(), seed, result.out()));
      } else {
        Check(sstk_model_load(model.c_str(), parent.out()));
        if (finetune->parsed())
          Check(sstk_finetune(cfg.get(), parent.get(), data.get(), seed, result.out()));
        else
          Check(sstk_transfer(cfg.get(), parent.get(), data.get(), seed, result.out()));
      }
      Check(sstk_model_save(result.get(), out.c_str()));
      char *digest = nullptr;
      Check(sstk_model_digest(result.get(), &digest));
      std::printf("model %s\n", Take(digest).c_str());
    } else if (decode->parsed()) {
      if (greedy) Check(sstk_config_set(cfg.get(), "decode.use_beam", "false"));
      ModelH m;
      ManifestH data;
      LmH lm;
      Check(sstk_model_load(model.c_str(), m.out()));
      ReadManifest(manifest, &data);
      if (!lm_path.empty()) Check(sstk_lm_load(lm_path.c_str(), lm.out()));
      size_t failed = 0;
      Check(sstk_decode(cfg.get(), m.get(), data.get(), lm.get(), out.c_str(), &failed));
      if (failed > 0) {
        std::fprintf(stderr, "sstk decode: %zu utterances failed\n", failed);
        return SSTK_ERR_DATA;
      }
    } else if (select->parsed()) {
      ManifestH labeled, sel, rej;
      ReadManifest(manifest, &labeled);
      if (!model.empty()) {
        ModelH m;
        ManifestH pseudo;
        Check(sstk_model_load(model.c_str(), m.out()));
        Check(sstk_pseudo_label(cfg.get(), m.get(), labeled.get(), pseudo.out()));
        std::swap(*labeled.out(), *pseudo.out());
      }
      char *rep = nullptr;
      Check(sstk_select(labeled.get(), sel.out(), rej.out(), &rep));
      const std::string text = Take(rep);
      Check(sstk_manifest_write(sel.get(), selected.c_str()));
      if (!rejected.empty()) Check(sstk_manifest_write(rej.get(), rejected.c_str()));
      if (!report_path.empty()) {
        FILE *f = std::fopen(report_path.c_str(), "w");
        if (!f) {
          std::fprintf(stderr, "sstk: cannot write %s\n", report_path.c_str());
          return SSTK_ERR_DATA;
        }
        std::fputs(text.c_str(), f);
        std::fclose(f);
      }
      std::fputs(text.c_str(), stdout);
    } else if (lm_train->parsed()) {
      Check(sstk_lm_train(text.c_str(), order, out.c_str()));
    } else if (lm_interp->parsed()) {
      std::vector<const char *> paths;
      for (const std::string &p : lms) paths.push_back(p.c_str());
      char *w = nullptr;
      Check(sstk_lm_interp(paths.data(), paths.size(), dev.c_str(), out.c_str(), &w));
      std::fputs(Take(w).c_str(), stdout);
    } else if (sst->parsed()) {
      ModelH boot, result;
      ManifestH unlabeled, gold;
      Check(sstk_model_load(model.c_str(), boot.out()));
      ReadManifest(manifest, &unlabeled);
      if (!in_domain.empty()) ReadManifest(in_domain, &gold);
      Check(sstk_sst(cfg.get(), boot.get(), gold.get(), unlabeled.get(), strategy.c_str(),
                     out_dir.c_str(), result.out()));
      Check(sstk_model_save(result.get(), out.c_str()));
    } else if (score->parsed()) {
      ManifestH refs;
      ReadManifest(ref, &refs);
      char *summary = nullptr;
      Check(sstk_score(refs.get(), hyp.c_str(), nullptr, &summary));
      std::fputs(Take(summary).c_str(), stdout);
    } else if (report->parsed()) {
      char *table = nullptr;
      Check(sstk_report(records.c_str(), baseline.c_str(), &table));
      std::fputs(Take(table).c_str(), stdout);
    } else if (experiment->parsed()) {
      char *table = nullptr;
      Check(sstk_experiment(cfg.get(), &table));
      std::fputs(Take(table).c_str(), stdout);
    } else if (phase_cmd->parsed()) {
      Check(sstk_run_phase(cfg.get(), phase.c_str()));
    }
  } catch (const Fail &f) {
    std::fprintf(stderr, "sstk: %s\n", sstk_last_error());
    return f.status;
  }
  return 0;
}
