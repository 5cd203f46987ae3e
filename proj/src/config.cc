// config.cc

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

#include "sstk/config.h"

#include <functional>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sstk/common.h"

namespace sstk {

TrainConfig TrainSection::ToTrainConfig(TrainMode mode, uint64_t seed) const {
  TrainConfig c;
  c.mode = mode;
  c.base_learning_rate = learning_rate;
  c.epochs = epochs;
  c.batch_size = batch_size;
  c.l2 = l2;
  c.seed = seed;
  return c;
}

namespace {

struct KeyDesc {
  std::string name;
  std::function<void(ExperimentConfig &, const std::string &)> set;
  std::function<std::string(const ExperimentConfig &)> get;
};

template <typename Ref>
KeyDesc Double(std::string name, Ref ref) {
  return {name,
          [ref, name](ExperimentConfig &c, const std::string &v) {
            ref(c) = ParseDouble(v, name);
          },
          [ref](const ExperimentConfig &c) {
            return FormatDouble(ref(const_cast<ExperimentConfig &>(c)));
          }};
}

template <typename Ref>
KeyDesc Int(std::string name, Ref ref) {
  return {name,
          [ref, name](ExperimentConfig &c, const std::string &v) {
            int64_t x = ParseInt(v, name);
            if (x < INT32_MIN || x > INT32_MAX)
              Fail(ErrorKind::kConfig, name, ": value out of range");
            ref(c) = static_cast<int>(x);
          },
          [ref](const ExperimentConfig &c) {
            return std::to_string(ref(const_cast<ExperimentConfig &>(c)));
          }};
}

template <typename Ref>
KeyDesc Seed(std::string name, Ref ref) {
  return {name,
          [ref, name](ExperimentConfig &c, const std::string &v) {
            const std::string t = Trim(v);
            if (t.empty() || t[0] == '-')
              Fail(ErrorKind::kConfig, name, ": expected a non-negative integer, got '", v, "'");
            size_t pos = 0;
            uint64_t x = 0;
            try {
              x = std::stoull(t, &pos);
            } catch (const std::exception &) {
              pos = 0;
            }
            if (pos != t.size())
              Fail(ErrorKind::kConfig, name, ": expected a non-negative integer, got '", v, "'");
            ref(c) = x;
          },
          [ref](const ExperimentConfig &c) {
            return std::to_string(ref(const_cast<ExperimentConfig &>(c)));
          }};
}

template <typename Ref>
KeyDesc Bool(std::string name, Ref ref) {
  return {name,
          [ref, name](ExperimentConfig &c, const std::string &v) {
            const std::string t = Trim(v);
            if (t == "true" || t == "1" || t == "yes") ref(c) = true;
            else if (t == "false" || t == "0" || t == "no") ref(c) = false;
            else Fail(ErrorKind::kConfig, name, ": expected true or false, got '", v, "'");
          },
          [ref](const ExperimentConfig &c) {
            return std::string(ref(const_cast<ExperimentConfig &>(c)) ? "true" : "false");
          }};
}

template <typename Ref>
KeyDesc String(std::string name, Ref ref) {
  return {name,
          [ref](ExperimentConfig &c, const std::string &v) { ref(c) = Trim(v); },
          [ref](const ExperimentConfig &c) { return ref(const_cast<ExperimentConfig &>(c)); }};
}

template <typename Ref>
KeyDesc DoubleList(std::string name, Ref ref) {
  return {name,
          [ref, name](ExperimentConfig &c, const std::string &v) {
            ref(c) = ParseDoubleList(v, name);
          },
          [ref](const ExperimentConfig &c) {
            std::vector<std::string> parts;
            for (double x : ref(const_cast<ExperimentConfig &>(c)))
              parts.push_back(FormatDouble(x));
            return Join(parts, ",");
          }};
}

template <typename Ref>
KeyDesc IntList(std::string name, Ref ref) {
  return {name,
          [ref, name](ExperimentConfig &c, const std::string &v) {
            ref(c) = ParseIntList(v, name);
          },
          [ref](const ExperimentConfig &c) {
            std::vector<std::string> parts;
            for (int x : ref(const_cast<ExperimentConfig &>(c)))
              parts.push_back(std::to_string(x));
            return Join(parts, ",");
          }};
}

template <typename Ref>
KeyDesc StringList(std::string name, Ref ref) {
  return {name,
          [ref](ExperimentConfig &c, const std::string &v) {
            std::vector<std::string> out;
            for (const std::string &p : SplitString(v, ','))
              if (!Trim(p).empty()) out.push_back(Trim(p));
            ref(c) = out;
          },
          [ref](const ExperimentConfig &c) {
            return Join(ref(const_cast<ExperimentConfig &>(c)), ",");
          }};
}

#define SSTK_REF(expr) [](ExperimentConfig & c) -> auto & { return c.expr; }

void AddTrainKeys(std::vector<KeyDesc> *k, const std::string &prefix,
                  std::function<TrainSection &(ExperimentConfig &)> sec) {
  k->push_back(Double(prefix + ".learning_rate",
                      [sec](ExperimentConfig &c) -> double & { return sec(c).learning_rate; }));
  k->push_back(Int(prefix + ".epochs",
                   [sec](ExperimentConfig &c) -> int & { return sec(c).epochs; }));
  k->push_back(Int(prefix + ".batch_size",
                   [sec](ExperimentConfig &c) -> int & { return sec(c).batch_size; }));
  k->push_back(Double(prefix + ".l2", [sec](ExperimentConfig &c) -> double & { return sec(c).l2; }));
}

const std::vector<KeyDesc> &Keys() {
  static const std::vector<KeyDesc> keys = [] {
    std::vector<KeyDesc> k;
    k.push_back(Seed("experiment.seed", SSTK_REF(seed)));
    k.push_back(String("experiment.out_dir", SSTK_REF(out_dir)));

    k.push_back(Int("corpus.vocabulary_size", SSTK_REF(corpus.synth.vocabulary_size)));
    k.push_back(Int("corpus.min_words", SSTK_REF(corpus.synth.min_words)));
    k.push_back(Int("corpus.max_words", SSTK_REF(corpus.synth.max_words)));
    k.push_back(Int("corpus.sample_rate", SSTK_REF(corpus.synth.sample_rate)));
    k.push_back(Double("corpus.word_min_s", SSTK_REF(corpus.synth.word_min_s)));
    k.push_back(Double("corpus.word_max_s", SSTK_REF(corpus.synth.word_max_s)));
    k.push_back(Double("corpus.silence_min_s", SSTK_REF(corpus.synth.silence_min_s)));
    k.push_back(Double("corpus.silence_max_s", SSTK_REF(corpus.synth.silence_max_s)));
    k.push_back(Double("corpus.min_tone_hz", SSTK_REF(corpus.synth.min_tone_hz)));
    k.push_back(Double("corpus.max_tone_hz", SSTK_REF(corpus.synth.max_tone_hz)));
    k.push_back(Double("corpus.grammar_bias", SSTK_REF(corpus.synth.grammar_bias)));
    k.push_back(Double("corpus.gain_jitter_db", SSTK_REF(corpus.synth.gain_jitter_db)));
    k.push_back(Double("corpus.tone_jitter", SSTK_REF(corpus.synth.tone_jitter)));
    k.push_back(Double("corpus.in_tilt_db_per_octave",
                       SSTK_REF(corpus.synth.in_domain.tilt_db_per_octave)));
    k.push_back(Double("corpus.in_snr_db", SSTK_REF(corpus.synth.in_domain.snr_db)));
    k.push_back(Double("corpus.in_tone_offset_hz", SSTK_REF(corpus.synth.in_domain.tone_offset_hz)));
    k.push_back(Double("corpus.ood_tilt_db_per_octave",
                       SSTK_REF(corpus.synth.out_of_domain.tilt_db_per_octave)));
    k.push_back(Double("corpus.ood_snr_db", SSTK_REF(corpus.synth.out_of_domain.snr_db)));
    k.push_back(Double("corpus.ood_tone_offset_hz",
                       SSTK_REF(corpus.synth.out_of_domain.tone_offset_hz)));
    k.push_back(Int("corpus.n_train", SSTK_REF(corpus.n_train)));
    k.push_back(Int("corpus.n_dev", SSTK_REF(corpus.n_dev)));
    k.push_back(Int("corpus.n_test", SSTK_REF(corpus.n_test)));
    k.push_back(Int("corpus.n_ood", SSTK_REF(corpus.n_ood)));
    k.push_back(String("corpus.train_manifest", SSTK_REF(corpus.train_manifest)));
    k.push_back(String("corpus.dev_manifest", SSTK_REF(corpus.dev_manifest)));
    k.push_back(String("corpus.test_manifest", SSTK_REF(corpus.test_manifest)));
    k.push_back(String("corpus.ood_manifest", SSTK_REF(corpus.ood_manifest)));

    k.push_back(Int("mfcc.n_mels", SSTK_REF(mfcc.n_mels)));
    k.push_back(Int("mfcc.n_coeffs", SSTK_REF(mfcc.n_coeffs)));
    k.push_back(Double("mfcc.pre_emphasis", SSTK_REF(mfcc.pre_emphasis)));
    k.push_back(Double("mfcc.frame_length", SSTK_REF(mfcc.frame_length)));
    k.push_back(Double("mfcc.frame_shift", SSTK_REF(mfcc.frame_shift)));
    k.push_back(Double("mfcc.log_floor", SSTK_REF(mfcc.log_floor)));
    k.push_back(Double("mfcc.low_freq", SSTK_REF(mfcc.low_freq)));
    k.push_back(Double("mfcc.high_freq", SSTK_REF(mfcc.high_freq)));
    k.push_back(Int("mfcc.sample_rate", SSTK_REF(mfcc.sample_rate)));

    k.push_back(DoubleList("perturb.factors", SSTK_REF(perturb_factors)));

    k.push_back(IntList("model.hidden_dims", SSTK_REF(hidden_dims)));
    k.push_back(Int("model.context", SSTK_REF(context)));

    AddTrainKeys(&k, "baseline", [](ExperimentConfig &c) -> TrainSection & { return c.baseline; });

    k.push_back(Int("sst.iterations", SSTK_REF(sst_iterations)));
    AddTrainKeys(&k, "sst", [](ExperimentConfig &c) -> TrainSection & { return c.sst; });

    k.push_back(Double("fine_tune.lr_scale", SSTK_REF(fine_tune.lr_scale)));
    k.push_back(Int("fine_tune.epochs", SSTK_REF(fine_tune.epochs)));
    k.push_back(Int("fine_tune.batch_size", SSTK_REF(fine_tune.batch_size)));
    k.push_back(Double("fine_tune.l2", SSTK_REF(fine_tune.l2)));

    k.push_back(Bool("transfer.enabled", SSTK_REF(transfer.enabled)));
    k.push_back(Double("transfer.gold_fraction", SSTK_REF(transfer.gold_fraction)));
    AddTrainKeys(&k, "transfer.source",
                 [](ExperimentConfig &c) -> TrainSection & { return c.transfer.source; });
    AddTrainKeys(&k, "transfer.target",
                 [](ExperimentConfig &c) -> TrainSection & { return c.transfer.target; });

    k.push_back(Int("lm.order", SSTK_REF(lm.order)));
    k.push_back(Int("lm.in_domain_sentences", SSTK_REF(lm.in_domain_sentences)));
    k.push_back(Int("lm.out_of_domain_sentences", SSTK_REF(lm.out_of_domain_sentences)));
    k.push_back(StringList("lm.extra_text", SSTK_REF(lm.extra_text)));
    k.push_back(Double("lm.em_tolerance", SSTK_REF(lm.em_tolerance)));
    k.push_back(Int("lm.em_max_iterations", SSTK_REF(lm.em_max_iterations)));

    k.push_back(Bool("decode.use_beam", SSTK_REF(decode.use_beam)));
    k.push_back(Int("decode.beam", SSTK_REF(decode.beam)));
    k.push_back(Double("decode.lm_weight", SSTK_REF(decode.lm_weight)));
    return k;
  }();
  return keys;
}

#undef SSTK_REF

const KeyDesc &FindKey(const std::string &key) {
  for (const KeyDesc &d : Keys())
    if (d.name == key) return d;
  Fail(ErrorKind::kConfig, "unknown configuration key '", key, "'");
}

void CheckFile(const std::string &path, const char *what) {
  if (!path.empty() && !std::filesystem::exists(path))
    Fail(ErrorKind::kConfig, what, ": file ", path, " does not exist");
}

void CheckTrain(const TrainSection &s, const std::string &name) {
  try {
    s.ToTrainConfig(TrainMode::kScratch, 1).Validate();
  } catch (const Error &e) {
    Fail(ErrorKind::kConfig, name, ": ", e.what());
  }
}

}  // namespace

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> out;
  for (const KeyDesc &d : Keys()) out.push_back(d.name);
  return out;
}

void SetConfigValue(ExperimentConfig *cfg, const std::string &key, const std::string &value) {
  try {
    FindKey(key).set(*cfg, value);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::kConfig) throw;
    throw Error(ErrorKind::kConfig, e.what());
  }
}

std::string GetConfigValue(const ExperimentConfig &cfg, const std::string &key) {
  return FindKey(key).get(cfg);
}

std::map<std::string, std::string> ReadIni(const std::filesystem::path &path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error &e) {
    Fail(ErrorKind::kConfig, "config: ", e.what());
  }
  std::map<std::string, std::string> out;
  for (const auto &[section, body] : tree) {
    if (!body.data().empty())
      Fail(ErrorKind::kConfig, "config ", path.string(), ": key '", section,
           "' must be inside a [section]");
    for (const auto &[key, value] : body) out[section + "." + key] = value.data();
  }
  return out;
}

ExperimentConfig LoadConfig(
    const std::filesystem::path &path,
    const std::vector<std::pair<std::string, std::string>> &overrides) {
  ExperimentConfig cfg;
  if (!path.empty()) {
    if (!std::filesystem::exists(path))
      Fail(ErrorKind::kConfig, "config file ", path.string(), " does not exist");
    for (const auto &[k, v] : ReadIni(path)) SetConfigValue(&cfg, k, v);
  }
  for (const auto &[k, v] : overrides) SetConfigValue(&cfg, k, v);
  FinalizeConfig(&cfg);
  return cfg;
}

void FinalizeConfig(ExperimentConfig *cfg) {
  auto absolute = [](std::string *p) {
    if (!p->empty()) *p = std::filesystem::absolute(*p).lexically_normal().string();
  };
  absolute(&cfg->out_dir);
  absolute(&cfg->corpus.train_manifest);
  absolute(&cfg->corpus.dev_manifest);
  absolute(&cfg->corpus.test_manifest);
  absolute(&cfg->corpus.ood_manifest);
  for (std::string &p : cfg->lm.extra_text) absolute(&p);
  cfg->Validate();
}

void ExperimentConfig::Validate() const {
  if (out_dir.empty()) Fail(ErrorKind::kConfig, "experiment.out_dir is empty");
  try {
    corpus.synth.Validate();
    mfcc.Validate();
  } catch (const Error &e) {
    Fail(ErrorKind::kConfig, e.what());
  }
  const bool any_manifest = !corpus.train_manifest.empty() || !corpus.dev_manifest.empty() ||
                            !corpus.test_manifest.empty() || !corpus.ood_manifest.empty();
  const bool all_manifests = !corpus.train_manifest.empty() && !corpus.dev_manifest.empty() &&
                             !corpus.test_manifest.empty() && !corpus.ood_manifest.empty();
  if (any_manifest && !all_manifests)
    Fail(ErrorKind::kConfig,
         "corpus: set all of train_manifest, dev_manifest, test_manifest, ood_manifest or none");
  CheckFile(corpus.train_manifest, "corpus.train_manifest");
  CheckFile(corpus.dev_manifest, "corpus.dev_manifest");
  CheckFile(corpus.test_manifest, "corpus.test_manifest");
  CheckFile(corpus.ood_manifest, "corpus.ood_manifest");
  for (const std::string &p : lm.extra_text) CheckFile(p, "lm.extra_text");
  if (corpus.n_train < 1 || corpus.n_dev < 1 || corpus.n_test < 1 || corpus.n_ood < 2)
    Fail(ErrorKind::kConfig, "corpus: n_train, n_dev, n_test must be >= 1 and n_ood >= 2");
  if (perturb_factors.empty()) Fail(ErrorKind::kConfig, "perturb.factors is empty");
  for (double f : perturb_factors)
    if (!(f > 0.0)) Fail(ErrorKind::kConfig, "perturb.factors must all be > 0");
  if (hidden_dims.empty()) Fail(ErrorKind::kConfig, "model.hidden_dims is empty");
  for (int h : hidden_dims)
    if (h < 1) Fail(ErrorKind::kConfig, "model.hidden_dims entries must be >= 1");
  if (context < 0) Fail(ErrorKind::kConfig, "model.context must be >= 0");
  CheckTrain(baseline, "baseline");
  CheckTrain(sst, "sst");
  CheckTrain(transfer.source, "transfer.source");
  CheckTrain(transfer.target, "transfer.target");
  CheckTrain({1.0, fine_tune.epochs, fine_tune.batch_size, fine_tune.l2}, "fine_tune");
  if (!(fine_tune.lr_scale > 0.0)) Fail(ErrorKind::kConfig, "fine_tune.lr_scale must be > 0");
  if (sst_iterations < 1) Fail(ErrorKind::kConfig, "sst.iterations must be >= 1");
  if (!(transfer.gold_fraction > 0.0 && transfer.gold_fraction <= 1.0))
    Fail(ErrorKind::kConfig, "transfer.gold_fraction must be in (0, 1]");
  if (lm.order < 1 || lm.order > 3) Fail(ErrorKind::kConfig, "lm.order must be 1, 2 or 3");
  if (lm.in_domain_sentences < 0 || lm.out_of_domain_sentences < 0)
    Fail(ErrorKind::kConfig, "lm sentence counts must be >= 0");
  if (!(lm.em_tolerance >= 0.0) || lm.em_max_iterations < 1)
    Fail(ErrorKind::kConfig, "lm.em_tolerance must be >= 0 and lm.em_max_iterations >= 1");
  if (decode.beam < 1) Fail(ErrorKind::kConfig, "decode.beam must be >= 1");
  if (!(decode.lm_weight >= 0.0)) Fail(ErrorKind::kConfig, "decode.lm_weight must be >= 0");
}

std::string FormatConfig(const ExperimentConfig &cfg) {
  std::string out;
  std::string section;
  for (const KeyDesc &d : Keys()) {
    const size_t dot = d.name.find('.');
    const std::string sec = d.name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += d.name.substr(dot + 1) + " = " + d.get(cfg) + "\n";
  }
  return out;
}

}  // namespace sstk
