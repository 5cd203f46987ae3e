// sstk/corpus.h

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

#ifndef SSTK_CORPUS_H_
#define SSTK_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sstk {

// Label conventions shared by every module: label 0 is silence, label k >= 1
// is the word spelled "wNN".
constexpr int kSilenceLabel = 0;
inline constexpr const char *kSilenceToken = "<sil>";

std::string LabelToken(int label);
/// Inverse of LabelToken; throws kData for anything that is not a word token.
int TokenLabel(const std::string &token);

/// Repeat-merge then silence-drop.
std::vector<int> CollapseLabels(std::span<const int> frame_labels);
std::vector<std::string> CollapseToTokens(std::span<const int> frame_labels);

enum class Domain { kInDomain, kOutOfDomain };
enum class LabelSource { kGold, kPseudo };

const char *DomainName(Domain d);
Domain ParseDomain(const std::string &s);
const char *LabelSourceName(LabelSource s);
LabelSource ParseLabelSource(const std::string &s);

struct UtteranceRecord {
  std::string id;
  std::string audio;
  std::optional<std::vector<std::string>> transcript;
  std::optional<std::vector<int>> frame_labels;
  Domain domain = Domain::kInDomain;
  LabelSource label_source = LabelSource::kGold;
  /// Mean per-frame log-probability of the decoded path (nats).
  std::optional<double> confidence;
  double speed_factor = 1.0;

  bool operator==(const UtteranceRecord &other) const = default;
};

/// An immutable, id-sorted list of utterances. Construction validates the
/// record invariants (unique ids, pseudo labels carry a confidence, frame
/// labels collapse to the transcript).
class Manifest {
 public:
  Manifest() = default;
  Manifest(std::string name, std::vector<UtteranceRecord> records);

  const std::string &name() const { return name_; }
  const std::vector<UtteranceRecord> &records() const { return records_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const UtteranceRecord *Find(const std::string &id) const;

  /// Line-oriented text form; see Write().
  std::string Serialize() const;
  static Manifest Parse(const std::string &text, const std::string &origin);

  /// One record per line, tab-separated key=value fields in the order id,
  /// audio, transcript, frame_labels, domain, label_source, confidence,
  /// speed_factor. Absent optional fields are omitted. A leading
  /// "#manifest name=..." line carries the name.
  void Write(const std::filesystem::path &path) const;
  static Manifest Read(const std::filesystem::path &path);

  bool operator==(const Manifest &other) const = default;

 private:
  std::string name_;
  std::vector<UtteranceRecord> records_;
};

/// Stable digest of the serialized manifest, used for lineage records.
std::string ManifestDigest(const Manifest &m);

struct PoolResult {
  Manifest manifest;
  std::vector<std::string> collisions;  // ids present in both inputs
};

/// Union of two manifests. On an id collision the record from `a` wins and the
/// id is reported; colliding records with different audio are an error.
PoolResult Pool(const Manifest &a, const Manifest &b);

/// Disjoint, exhaustive random partition. `fractions` must sum to 1.
std::vector<Manifest> Split(const Manifest &m, std::span<const double> fractions,
                            uint64_t seed);

/// Replaces transcripts/frame labels/confidence with nothing, keeping audio.
Manifest StripLabels(const Manifest &m, const std::string &name);

struct ChannelParams {
  double tilt_db_per_octave = 0.0;
  double snr_db = 30.0;
  double tone_offset_hz = 0.0;
};

struct SynthSpec {
  int vocabulary_size = 10;
  int min_words = 3;
  int max_words = 6;
  int sample_rate = 8000;
  double word_min_s = 0.12;
  double word_max_s = 0.24;
  double silence_min_s = 0.06;
  double silence_max_s = 0.12;
  double min_tone_hz = 300.0;
  double max_tone_hz = 3400.0;
  /// Probability mass given to each word's two favoured successors; the rest
  /// is spread uniformly. 0 gives i.i.d. uniform word sequences.
  double grammar_bias = 0.6;
  /// Per-word random gain, uniform in +-gain_jitter_db.
  double gain_jitter_db = 3.0;
  /// Per-word relative tone jitter, uniform in +-tone_jitter.
  double tone_jitter = 0.01;
  ChannelParams in_domain{0.0, 30.0, 0.0};
  ChannelParams out_of_domain{3.0, 15.0, 40.0};
  /// Frame geometry used for the emitted frame labels.
  double frame_length_s = 0.025;
  double frame_shift_s = 0.010;
  uint64_t seed = 1;

  void Validate() const;
};

/// The two tone frequencies (Hz, before domain offset) of word label k >= 1.
std::vector<std::pair<double, double>> WordTones(const SynthSpec &spec);

/// Draws a sentence of word labels from the synthetic grammar.
std::vector<int> SampleWordSequence(const SynthSpec &spec, uint64_t seed);

/// Text-only sentences from the same grammar (for LM data).
std::vector<std::vector<std::string>> GenerateSentences(const SynthSpec &spec,
                                                        int n, uint64_t seed);

/// Renders `n_utterances` utterances as 16-bit WAV files under `out_dir` and
/// returns their gold manifest. Ids are "<prefix>-NNNNN"; each utterance's
/// content is a pure function of (spec, domain, id).
Manifest GenerateCorpus(const SynthSpec &spec, int n_utterances, Domain domain,
                        const std::filesystem::path &out_dir,
                        const std::string &prefix);

}  // namespace sstk

#endif  // SSTK_CORPUS_H_
