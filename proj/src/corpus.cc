// corpus.cc

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

#include "sstk/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "sstk/common.h"
#include "sstk/dsp.h"
#include "sstk/log.h"

namespace sstk {

std::string LabelToken(int label) {
  if (label == kSilenceLabel) return kSilenceToken;
  if (label < 0) Fail(ErrorKind::kData, "negative label id ", label);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "w%02d", label);
  return buf;
}

int TokenLabel(const std::string &token) {
  if (token.size() < 2 || token[0] != 'w' ||
      token.find_first_not_of("0123456789", 1) != std::string::npos)
    Fail(ErrorKind::kData, "'", token, "' is not a word token");
  int label = static_cast<int>(ParseInt(token.substr(1), "word token"));
  if (label <= 0) Fail(ErrorKind::kData, "'", token, "' is not a word token");
  return label;
}

std::vector<int> CollapseLabels(std::span<const int> frame_labels) {
  std::vector<int> out;
  int prev = -1;
  for (int l : frame_labels) {
    if (l != prev && l != kSilenceLabel) out.push_back(l);
    prev = l;
  }
  return out;
}

std::vector<std::string> CollapseToTokens(std::span<const int> frame_labels) {
  std::vector<std::string> out;
  for (int l : CollapseLabels(frame_labels)) out.push_back(LabelToken(l));
  return out;
}

const char *DomainName(Domain d) {
  return d == Domain::kInDomain ? "in_domain" : "out_of_domain";
}

Domain ParseDomain(const std::string &s) {
  if (s == "in_domain" || s == "in") return Domain::kInDomain;
  if (s == "out_of_domain" || s == "ood") return Domain::kOutOfDomain;
  Fail(ErrorKind::kData, "unknown domain '", s, "'");
}

const char *LabelSourceName(LabelSource s) {
  return s == LabelSource::kGold ? "gold" : "pseudo";
}

LabelSource ParseLabelSource(const std::string &s) {
  if (s == "gold") return LabelSource::kGold;
  if (s == "pseudo") return LabelSource::kPseudo;
  Fail(ErrorKind::kData, "unknown label_source '", s, "'");
}

// ---------------------------------------------------------------- Manifest

Manifest::Manifest(std::string name, std::vector<UtteranceRecord> records)
    : name_(std::move(name)), records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const UtteranceRecord &a, const UtteranceRecord &b) {
              return a.id < b.id;
            });
  for (size_t i = 0; i < records_.size(); ++i) {
    const UtteranceRecord &r = records_[i];
    if (r.id.empty()) Fail(ErrorKind::kData, "manifest ", name_, ": empty id");
    if (i > 0 && records_[i - 1].id == r.id)
      Fail(ErrorKind::kData, "manifest ", name_, ": duplicate id ", r.id);
    if (r.label_source == LabelSource::kPseudo && !r.confidence)
      Fail(ErrorKind::kData, "manifest ", name_, ": pseudo-labelled record ",
           r.id, " has no confidence");
    if (r.frame_labels) {
      std::vector<std::string> collapsed = CollapseToTokens(*r.frame_labels);
      if (!r.transcript || collapsed != *r.transcript)
        Fail(ErrorKind::kData, "manifest ", name_, ": record ", r.id,
             " frame labels do not collapse to its transcript");
    }
    if (!(r.speed_factor > 0.0))
      Fail(ErrorKind::kData, "manifest ", name_, ": record ", r.id,
           " has non-positive speed_factor");
  }
}

const UtteranceRecord *Manifest::Find(const std::string &id) const {
  auto it = std::lower_bound(
      records_.begin(), records_.end(), id,
      [](const UtteranceRecord &r, const std::string &key) { return r.id < key; });
  if (it == records_.end() || it->id != id) return nullptr;
  return &*it;
}

namespace {

void CheckField(const std::string &value, const char *what) {
  if (value.find_first_of("\t\n\r") != std::string::npos)
    Fail(ErrorKind::kData, what, " '", value, "' contains a tab or newline");
}

}  // namespace

std::string Manifest::Serialize() const {
  CheckField(name_, "manifest name");
  std::string out = "#manifest\tname=" + name_ + "\n";
  for (const UtteranceRecord &r : records_) {
    CheckField(r.id, "id");
    CheckField(r.audio, "audio path");
    out += "id=" + r.id;
    out += "\taudio=" + r.audio;
    if (r.transcript) out += "\ttranscript=" + Join(*r.transcript, " ");
    if (r.frame_labels) {
      out += "\tframe_labels=";
      for (size_t i = 0; i < r.frame_labels->size(); ++i) {
        if (i) out.push_back(' ');
        out += std::to_string((*r.frame_labels)[i]);
      }
    }
    out += std::string("\tdomain=") + DomainName(r.domain);
    out += std::string("\tlabel_source=") + LabelSourceName(r.label_source);
    if (r.confidence) out += "\tconfidence=" + FormatDouble(*r.confidence);
    out += "\tspeed_factor=" + FormatDouble(r.speed_factor);
    out.push_back('\n');
  }
  return out;
}

Manifest Manifest::Parse(const std::string &text, const std::string &origin) {
  std::string name;
  std::vector<UtteranceRecord> records;
  size_t line_no = 0;
  for (const std::string &raw : SplitString(text, '\n', false)) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      for (const std::string &f : SplitString(line, '\t'))
        if (f.rfind("name=", 0) == 0) name = f.substr(5);
      continue;
    }
    UtteranceRecord r;
    bool have_id = false, have_audio = false;
    try {
      for (const std::string &field : SplitString(line, '\t')) {
        size_t eq = field.find('=');
        if (eq == std::string::npos)
          Fail(ErrorKind::kData, "field '", field, "' is not key=value");
        std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "id") {
          r.id = value;
          have_id = true;
        } else if (key == "audio") {
          r.audio = value;
          have_audio = true;
        } else if (key == "transcript") {
          r.transcript = SplitString(value, ' ');
        } else if (key == "frame_labels") {
          r.frame_labels = ParseIntList(value, "frame_labels");
        } else if (key == "domain") {
          r.domain = ParseDomain(value);
        } else if (key == "label_source") {
          r.label_source = ParseLabelSource(value);
        } else if (key == "confidence") {
          r.confidence = ParseDouble(value, "confidence");
        } else if (key == "speed_factor") {
          r.speed_factor = ParseDouble(value, "speed_factor");
        } else {
          Fail(ErrorKind::kData, "unknown field '", key, "'");
        }
      }
    } catch (const Error &e) {
      Fail(ErrorKind::kData, origin, ":", line_no, ": ", e.what());
    }
    if (!have_id || !have_audio)
      Fail(ErrorKind::kData, origin, ":", line_no, ": record needs id and audio");
    records.push_back(std::move(r));
  }
  return Manifest(name, std::move(records));
}

void Manifest::Write(const std::filesystem::path &path) const {
  WriteTextFileAtomic(path, Serialize());
}

Manifest Manifest::Read(const std::filesystem::path &path) {
  return Parse(ReadTextFile(path), path.string());
}

std::string ManifestDigest(const Manifest &m) {
  return HexDigest(Fnv1a(m.Serialize()));
}

PoolResult Pool(const Manifest &a, const Manifest &b) {
  PoolResult result;
  std::vector<UtteranceRecord> records = a.records();
  for (const UtteranceRecord &r : b.records()) {
    if (const UtteranceRecord *existing = a.Find(r.id)) {
      if (existing->audio != r.audio)
        Fail(ErrorKind::kData, "pool: conflicting records for id ", r.id, " (",
             existing->audio, " vs ", r.audio, ")");
      result.collisions.push_back(r.id);
      continue;
    }
    records.push_back(r);
  }
  if (!result.collisions.empty())
    SSTK_WARN << "pool: " << result.collisions.size()
              << " duplicate ids kept from '" << a.name() << "', first is "
              << result.collisions.front();
  result.manifest = Manifest(a.name(), std::move(records));
  return result;
}

std::vector<Manifest> Split(const Manifest &m, std::span<const double> fractions,
                            uint64_t seed) {
  if (m.empty()) Fail(ErrorKind::kData, "split: empty manifest ", m.name());
  if (fractions.empty()) Fail(ErrorKind::kConfig, "split: no fractions given");
  double total = 0.0;
  for (double f : fractions) {
    if (f < 0.0) Fail(ErrorKind::kConfig, "split: negative fraction ", f);
    total += f;
  }
  if (std::fabs(total - 1.0) > 1e-9)
    Fail(ErrorKind::kConfig, "split: fractions sum to ", FormatDouble(total),
         ", not 1");

  std::vector<size_t> order(m.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(&order);

  std::vector<Manifest> parts;
  double cum = 0.0;
  size_t begin = 0;
  for (size_t p = 0; p < fractions.size(); ++p) {
    cum += fractions[p];
    size_t end = (p + 1 == fractions.size())
                     ? m.size()
                     : std::min(m.size(), static_cast<size_t>(std::llround(
                                              cum * static_cast<double>(m.size()))));
    end = std::max(end, begin);
    std::vector<UtteranceRecord> recs;
    for (size_t i = begin; i < end; ++i) recs.push_back(m.records()[order[i]]);
    parts.emplace_back(m.name() + ".part" + std::to_string(p), std::move(recs));
    begin = end;
  }
  return parts;
}

Manifest StripLabels(const Manifest &m, const std::string &name) {
  std::vector<UtteranceRecord> out;
  for (UtteranceRecord r : m.records()) {
    r.transcript.reset();
    r.frame_labels.reset();
    r.confidence.reset();
    r.label_source = LabelSource::kGold;
    out.push_back(std::move(r));
  }
  return Manifest(name, std::move(out));
}

// ---------------------------------------------------------------- synthesis

void SynthSpec::Validate() const {
  if (vocabulary_size < 2)
    Fail(ErrorKind::kConfig, "synth: vocabulary_size must be >= 2");
  if (min_words < 1 || max_words < min_words)
    Fail(ErrorKind::kConfig, "synth: bad words-per-utterance range [", min_words,
         ", ", max_words, "]");
  if (sample_rate <= 0) Fail(ErrorKind::kConfig, "synth: sample_rate must be > 0");
  if (!(frame_shift_s > 0.0) || frame_length_s < frame_shift_s)
    Fail(ErrorKind::kConfig, "synth: bad frame geometry");
  // Each word and each pause must own at least one frame centre, otherwise the
  // frame labels would not collapse to the transcript.
  if (!(word_min_s >= 2.0 * frame_shift_s) || word_max_s < word_min_s)
    Fail(ErrorKind::kConfig, "synth: degenerate word durations [", word_min_s,
         ", ", word_max_s, "] s");
  if (!(silence_min_s >= 2.0 * frame_shift_s) || silence_max_s < silence_min_s)
    Fail(ErrorKind::kConfig, "synth: degenerate silence durations [",
         silence_min_s, ", ", silence_max_s, "] s");
  if (!(min_tone_hz > 0.0) || max_tone_hz <= min_tone_hz ||
      max_tone_hz >= sample_rate / 2.0)
    Fail(ErrorKind::kConfig, "synth: tone band must lie inside (0, Nyquist)");
  if (grammar_bias < 0.0 || grammar_bias > 1.0)
    Fail(ErrorKind::kConfig, "synth: grammar_bias must be in [0, 1]");
}

std::vector<std::pair<double, double>> WordTones(const SynthSpec &spec) {
  const int n = 2 * spec.vocabulary_size;
  std::vector<double> grid(n);
  const double ratio = spec.max_tone_hz / spec.min_tone_hz;
  for (int i = 0; i < n; ++i)
    grid[i] = spec.min_tone_hz * std::pow(ratio, static_cast<double>(i) / (n - 1));
  Rng rng(DeriveSeed(spec.seed, "tones"));
  rng.Shuffle(&grid);
  std::vector<std::pair<double, double>> tones(spec.vocabulary_size + 1, {0.0, 0.0});
  for (int k = 1; k <= spec.vocabulary_size; ++k) {
    double a = grid[2 * (k - 1)], b = grid[2 * (k - 1) + 1];
    tones[k] = {std::min(a, b), std::max(a, b)};
  }
  return tones;
}

namespace {

// Two favoured successors per word (labels 1..V).
std::vector<std::pair<int, int>> Successors(const SynthSpec &spec) {
  Rng rng(DeriveSeed(spec.seed, "grammar"));
  const int v = spec.vocabulary_size;
  std::vector<std::pair<int, int>> succ(v + 1, {1, 1});
  for (int k = 1; k <= v; ++k) {
    int a = 1 + static_cast<int>(rng.UniformInt(v));
    int b = a;
    while (b == a) b = 1 + static_cast<int>(rng.UniformInt(v));
    succ[k] = {a, b};
  }
  return succ;
}

std::vector<int> SampleWords(const SynthSpec &spec,
                             const std::vector<std::pair<int, int>> &succ,
                             Rng *rng) {
  const int v = spec.vocabulary_size;
  int n = static_cast<int>(rng->UniformRange(spec.min_words, spec.max_words));
  std::vector<int> words;
  for (int i = 0; i < n; ++i) {
    int w;
    if (i > 0 && rng->Uniform() < spec.grammar_bias) {
      const auto &s = succ[words.back()];
      w = rng->Uniform() < 0.5 ? s.first : s.second;
    } else {
      w = 1 + static_cast<int>(rng->UniformInt(v));
    }
    words.push_back(w);
  }
  return words;
}

}  // namespace

std::vector<int> SampleWordSequence(const SynthSpec &spec, uint64_t seed) {
  Rng rng(seed);
  return SampleWords(spec, Successors(spec), &rng);
}

std::vector<std::vector<std::string>> GenerateSentences(const SynthSpec &spec,
                                                        int n, uint64_t seed) {
  spec.Validate();
  auto succ = Successors(spec);
  Rng rng(seed);
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> sent;
    for (int w : SampleWords(spec, succ, &rng)) sent.push_back(LabelToken(w));
    out.push_back(std::move(sent));
  }
  return out;
}

Manifest GenerateCorpus(const SynthSpec &spec, int n_utterances, Domain domain,
                        const std::filesystem::path &out_dir,
                        const std::string &prefix) {
  spec.Validate();
  if (n_utterances < 1)
    Fail(ErrorKind::kConfig, "synth: n_utterances must be >= 1");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    Fail(ErrorKind::kData, "synth: cannot create output directory ",
         out_dir.string());

  const ChannelParams &chan =
      domain == Domain::kInDomain ? spec.in_domain : spec.out_of_domain;
  const auto tones = WordTones(spec);
  const auto succ = Successors(spec);
  const double sr = spec.sample_rate;
  const int window = static_cast<int>(std::lround(spec.frame_length_s * sr));
  const int hop = static_cast<int>(std::lround(spec.frame_shift_s * sr));
  const int ramp = static_cast<int>(0.01 * sr);

  std::vector<UtteranceRecord> records;
  for (int u = 0; u < n_utterances; ++u) {
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "-%05d", u);
    const std::string id = prefix + idbuf;
    Rng rng(DeriveSeed(spec.seed, std::string(DomainName(domain)) + ":" + id));
    const std::vector<int> words = SampleWords(spec, succ, &rng);

    // Segment layout: silence, word, silence, ..., word, silence.
    std::vector<std::pair<int, long>> segments;  // (label, n_samples)
    auto silence = [&] {
      return std::lround(rng.Uniform(spec.silence_min_s, spec.silence_max_s) * sr);
    };
    segments.push_back({kSilenceLabel, silence()});
    for (int w : words) {
      segments.push_back({w, std::lround(rng.Uniform(spec.word_min_s, spec.word_max_s) * sr)});
      segments.push_back({kSilenceLabel, silence()});
    }
    long total = 0;
    for (const auto &s : segments) total += s.second;

    AudioBuffer buf;
    buf.sample_rate = spec.sample_rate;
    buf.samples.assign(total, 0.0);
    std::vector<int> sample_labels(total, kSilenceLabel);
    long pos = 0;
    for (const auto &[label, len] : segments) {
      if (label != kSilenceLabel) {
        const double gain_db = rng.Uniform(-spec.gain_jitter_db, spec.gain_jitter_db);
        const double base_amp = 0.25 * std::pow(10.0, gain_db / 20.0);
        const double freqs[2] = {tones[label].first, tones[label].second};
        for (double f0 : freqs) {
          const double f =
              f0 * (1.0 + rng.Uniform(-spec.tone_jitter, spec.tone_jitter)) +
              chan.tone_offset_hz;
          const double tilt_db = chan.tilt_db_per_octave * std::log2(f / 1000.0);
          const double amp = base_amp * std::pow(10.0, tilt_db / 20.0);
          const double phase = rng.Uniform(0.0, 2.0 * M_PI);
          for (long i = 0; i < len; ++i) {
            double env = 1.0;
            if (i < ramp) env = 0.5 - 0.5 * std::cos(M_PI * i / ramp);
            else if (len - 1 - i < ramp) env = 0.5 - 0.5 * std::cos(M_PI * (len - 1 - i) / ramp);
            buf.samples[pos + i] += amp * env * std::sin(2.0 * M_PI * f * i / sr + phase);
          }
        }
        std::fill(sample_labels.begin() + pos, sample_labels.begin() + pos + len, label);
      }
      pos += len;
    }

    if (std::isfinite(chan.snr_db)) {
      double power = 0.0;
      for (double x : buf.samples) power += x * x;
      power /= static_cast<double>(total);
      const double sigma = std::sqrt(power / std::pow(10.0, chan.snr_db / 10.0));
      for (double &x : buf.samples) x += sigma * rng.Gaussian();
    }
    for (double &x : buf.samples) x = std::clamp(x, -1.0, 1.0);

    UtteranceRecord rec;
    rec.id = id;
    rec.audio = (out_dir / (id + ".wav")).string();
    rec.domain = domain;
    rec.label_source = LabelSource::kGold;
    const int frames = NumFrames(total, window, hop);
    std::vector<int> frame_labels(frames);
    for (int j = 0; j < frames; ++j)
      frame_labels[j] = sample_labels[static_cast<size_t>(j) * hop + window / 2];
    rec.transcript = CollapseToTokens(frame_labels);
    rec.frame_labels = std::move(frame_labels);
    WriteWav(buf, rec.audio);
    records.push_back(std::move(rec));
  }
  return Manifest(prefix, std::move(records));
}

}  // namespace sstk
