// sstk/lm.h

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

#ifndef SSTK_LM_H_
#define SSTK_LM_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sstk {

using Sentence = std::vector<std::string>;

/// Word <-> id table. Ids 0, 1, 2 are always <s>, </s>, <unk>.
class Vocabulary {
 public:
  static constexpr int kBos = 0, kEos = 1, kUnk = 2;
  static constexpr int kNone = -1;  // "no history word"

  Vocabulary();
  int Add(const std::string &word);
  /// Id of `word`, or kUnk.
  int Id(const std::string &word) const;
  /// Id of `word`, or -1.
  int Find(const std::string &word) const;
  const std::string &Word(int id) const { return words_.at(id); }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string> &words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

/// Anything that assigns p(w | h2 h1) over a vocabulary; h2 is the older
/// history word. Probabilities sum to one over every id except <s>.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual const Vocabulary &vocab() const = 0;
  virtual double Prob(int word, int h2, int h1) const = 0;
  double LogProb(int word, int h2, int h1) const;
};

/// Backoff trigram (or lower order) model in ARPA form: explicit entries for
/// seen n-grams plus backoff weights.
class NGramModel : public LanguageModel {
 public:
  NGramModel(Vocabulary vocab, int order);

  const Vocabulary &vocab() const override { return vocab_; }
  double Prob(int word, int h2, int h1) const override;
  int order() const { return order_; }

  /// Uniform distribution over every id except <s>.
  static NGramModel Uniform(const Vocabulary &vocab);

  struct Entry {
    double prob = 0.0;
    double backoff = 1.0;
  };
  void SetUnigram(int w, double prob, double backoff);
  void SetBigram(int h1, int w, double prob, double backoff);
  void SetTrigram(int h2, int h1, int w, double prob);

  const std::vector<Entry> &unigrams() const { return unigrams_; }
  const std::unordered_map<uint64_t, Entry> &bigrams() const { return bigrams_; }
  const std::unordered_map<uint64_t, double> &trigrams() const { return trigrams_; }

  static uint64_t Key(int a, int b) {
    return (static_cast<uint64_t>(a) << 21) | static_cast<uint64_t>(b);
  }
  static uint64_t Key(int a, int b, int c) {
    return (static_cast<uint64_t>(a) << 42) | (static_cast<uint64_t>(b) << 21) |
           static_cast<uint64_t>(c);
  }

 private:
  double BigramProb(int word, int h1) const;

  Vocabulary vocab_;
  int order_;
  std::vector<Entry> unigrams_;
  std::unordered_map<uint64_t, Entry> bigrams_;
  std::unordered_map<uint64_t, double> trigrams_;
};

/// Probability mass added to <unk> in the unigram distribution before
/// renormalisation.
inline constexpr double kUnkFloor = 1e-6;

/// Interpolated Witten-Bell trigram stored in backoff form. Words of
/// `extra_vocab` join the vocabulary even if unseen; words outside the
/// vocabulary map to <unk>.
NGramModel TrainLm(std::span<const Sentence> corpus,
                   std::span<const std::string> extra_vocab = {}, int order = 3);

/// Linear mixture p(w|h) = sum_i weight_i p_i(w|h) over the union vocabulary.
/// Words unknown to a component share that component's <unk> probability
/// equally with <unk> itself, so each component stays normalised.
class InterpolatedModel : public LanguageModel {
 public:
  InterpolatedModel(std::vector<std::shared_ptr<const LanguageModel>> components,
                    std::vector<double> weights);

  const Vocabulary &vocab() const override { return vocab_; }
  double Prob(int word, int h2, int h1) const override;
  const std::vector<double> &weights() const { return weights_; }
  const std::vector<std::shared_ptr<const LanguageModel>> &components() const {
    return components_;
  }
  /// p_i(w | h) for one component, with ids in the mixture vocabulary.
  double ComponentProb(size_t i, int word, int h2, int h1) const;

 private:
  std::vector<std::shared_ptr<const LanguageModel>> components_;
  std::vector<double> weights_;
  Vocabulary vocab_;
  std::vector<std::vector<int>> id_maps_;  // per component: mixture id -> own id
  std::vector<int> unk_shares_;            // per component: mixture ids mapped to <unk>
};

/// Natural-log probabilities of each predicted token (words then </s>).
std::vector<double> SentenceLogProbs(const LanguageModel &lm, const Sentence &s);

/// exp(-mean log p) over all predicted tokens, </s> included, <s> excluded.
double Perplexity(const LanguageModel &lm, std::span<const Sentence> text);

struct InterpolationFit {
  std::vector<double> weights;
  /// Mean dev log-likelihood per token, starting with the uniform initial
  /// weights and then once per EM iteration.
  std::vector<double> log_likelihood;
  std::vector<double> perplexity;
  int iterations = 0;
};

/// EM on the mixture weights. Stops when the mean log-likelihood gain drops
/// below `tol` or after `max_iters` iterations.
InterpolationFit FitInterpolationWeights(
    const std::vector<std::shared_ptr<const LanguageModel>> &components,
    std::span<const Sentence> dev_text, double tol = 1e-6, int max_iters = 100);

/// ARPA text format, log10 probabilities.
std::string FormatArpa(const NGramModel &model);
NGramModel ParseArpa(const std::string &text, const std::string &origin);
void WriteArpa(const NGramModel &model, const std::filesystem::path &path);
NGramModel ReadArpa(const std::filesystem::path &path);

/// Mixture description file: a "#sstk-lm-mixture v1" header, then one
/// "<weight>\t<arpa path>" line per component (relative paths resolve
/// against the file's directory).
void WriteMixture(const std::vector<std::filesystem::path> &arpa_paths,
                  std::span<const double> weights,
                  const std::filesystem::path &path);
/// Loads either an ARPA file or a mixture file.
std::shared_ptr<const LanguageModel> LoadLanguageModel(
    const std::filesystem::path &path);

/// One sentence per line, whitespace tokenised; blank lines skipped.
std::vector<Sentence> ReadSentences(const std::filesystem::path &path);
void WriteSentences(std::span<const Sentence> text, const std::filesystem::path &path);

}  // namespace sstk

#endif  // SSTK_LM_H_
