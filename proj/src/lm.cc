// lm.cc

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

#include "sstk/lm.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "sstk/common.h"

namespace sstk {

// ---------------------------------------------------------------- Vocabulary

Vocabulary::Vocabulary() {
  Add("<s>");
  Add("</s>");
  Add("<unk>");
}

int Vocabulary::Add(const std::string &word) {
  auto it = index_.find(word);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(words_.size());
  if (id >= (1 << 21)) Fail(ErrorKind::kData, "vocabulary too large");
  words_.push_back(word);
  index_.emplace(word, id);
  return id;
}

int Vocabulary::Id(const std::string &word) const {
  int id = Find(word);
  return id < 0 ? kUnk : id;
}

int Vocabulary::Find(const std::string &word) const {
  auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

double LanguageModel::LogProb(int word, int h2, int h1) const {
  return std::log(Prob(word, h2, h1));
}

// ---------------------------------------------------------------- NGramModel

NGramModel::NGramModel(Vocabulary vocab, int order)
    : vocab_(std::move(vocab)), order_(order), unigrams_(vocab_.size()) {
  if (order < 1 || order > 3)
    Fail(ErrorKind::kConfig, "n-gram order must be 1, 2 or 3, got ", order);
}

void NGramModel::SetUnigram(int w, double prob, double backoff) {
  unigrams_.at(w) = {prob, backoff};
}

void NGramModel::SetBigram(int h1, int w, double prob, double backoff) {
  bigrams_[Key(h1, w)] = {prob, backoff};
}

void NGramModel::SetTrigram(int h2, int h1, int w, double prob) {
  trigrams_[Key(h2, h1, w)] = prob;
}

double NGramModel::BigramProb(int word, int h1) const {
  auto it = bigrams_.find(Key(h1, word));
  if (it != bigrams_.end()) return it->second.prob;
  return unigrams_[h1].backoff * unigrams_[word].prob;
}

double NGramModel::Prob(int word, int h2, int h1) const {
  if (word < 0 || word >= vocab_.size()) return 0.0;
  if (word == Vocabulary::kBos) return 0.0;
  if (order_ == 1 || h1 == Vocabulary::kNone) return unigrams_[word].prob;
  if (order_ >= 3 && h2 != Vocabulary::kNone) {
    auto it = trigrams_.find(Key(h2, h1, word));
    if (it != trigrams_.end()) return it->second;
    auto ctx = bigrams_.find(Key(h2, h1));
    const double bow = ctx == bigrams_.end() ? 1.0 : ctx->second.backoff;
    return bow * BigramProb(word, h1);
  }
  return BigramProb(word, h1);
}

NGramModel NGramModel::Uniform(const Vocabulary &vocab) {
  NGramModel m(vocab, 1);
  const double p = 1.0 / (vocab.size() - 1);
  for (int w = 0; w < vocab.size(); ++w)
    m.SetUnigram(w, w == Vocabulary::kBos ? 0.0 : p, 1.0);
  return m;
}

NGramModel TrainLm(std::span<const Sentence> corpus,
                   std::span<const std::string> extra_vocab, int order) {
  if (corpus.empty()) Fail(ErrorKind::kData, "lm: empty training corpus");
  std::set<std::string> words(extra_vocab.begin(), extra_vocab.end());
  for (const Sentence &s : corpus) words.insert(s.begin(), s.end());
  Vocabulary vocab;
  for (const std::string &w : words) vocab.Add(w);
  NGramModel model(vocab, order);

  std::vector<double> c1(vocab.size(), 0.0);
  std::map<uint64_t, double> c2, c3;
  for (const Sentence &s : corpus) {
    std::vector<int> ids{Vocabulary::kBos};
    for (const std::string &w : s) ids.push_back(vocab.Id(w));
    ids.push_back(Vocabulary::kEos);
    for (size_t i = 1; i < ids.size(); ++i) {
      c1[ids[i]] += 1.0;
      c2[NGramModel::Key(ids[i - 1], ids[i])] += 1.0;
      if (i >= 2) c3[NGramModel::Key(ids[i - 2], ids[i - 1], ids[i])] += 1.0;
    }
  }

  // Unigrams: Witten-Bell interpolation with the uniform distribution over
  // every predictable id.
  const double n_predictable = vocab.size() - 1;
  double total = 0.0, types = 0.0;
  for (int w = 1; w < vocab.size(); ++w) {
    total += c1[w];
    types += (c1[w] > 0.0);
  }
  std::vector<double> p1(vocab.size(), 0.0);
  for (int w = 1; w < vocab.size(); ++w)
    p1[w] = (c1[w] + types / n_predictable) / (total + types);
  p1[Vocabulary::kUnk] += kUnkFloor;
  const double norm = 1.0 + kUnkFloor;
  for (int w = 1; w < vocab.size(); ++w) p1[w] /= norm;
  for (int w = 0; w < vocab.size(); ++w) model.SetUnigram(w, p1[w], 1.0);
  if (order == 1) return model;

  // History statistics: total count and number of distinct followers.
  auto history_stats = [](const std::map<uint64_t, double> &counts) {
    std::map<uint64_t, std::pair<double, double>> stats;
    for (const auto &[key, c] : counts) {
      auto &st = stats[key >> 21];
      st.first += c;
      st.second += 1.0;
    }
    return stats;
  };

  const auto h2stats = history_stats(c2);
  for (const auto &[h, st] : h2stats)
    model.SetUnigram(static_cast<int>(h), p1[h], st.second / (st.first + st.second));
  for (const auto &[key, c] : c2) {
    const uint64_t h = key >> 21;
    const int w = static_cast<int>(key & ((1u << 21) - 1));
    const auto &st = h2stats.at(h);
    model.SetBigram(static_cast<int>(h), w, (c + st.second * p1[w]) / (st.first + st.second),
                    1.0);
  }
  if (order == 2) return model;

  const auto h3stats = history_stats(c3);
  const NGramModel bigram_view = model;  // p2 lookups before trigram entries exist
  for (const auto &[key, c] : c3) {
    const uint64_t hist = key >> 21;
    const int u = static_cast<int>(hist >> 21), v = static_cast<int>(hist & ((1u << 21) - 1));
    const int w = static_cast<int>(key & ((1u << 21) - 1));
    const auto &st = h3stats.at(hist);
    const double p2 = bigram_view.Prob(w, Vocabulary::kNone, v);
    model.SetTrigram(u, v, w, (c + st.second * p2) / (st.first + st.second));
  }
  for (const auto &[hist, st] : h3stats) {
    const int u = static_cast<int>(hist >> 21), v = static_cast<int>(hist & ((1u << 21) - 1));
    auto it = model.bigrams().find(NGramModel::Key(u, v));
    model.SetBigram(u, v, it->second.prob, st.second / (st.first + st.second));
  }
  return model;
}

// ---------------------------------------------------------------- mixtures

InterpolatedModel::InterpolatedModel(
    std::vector<std::shared_ptr<const LanguageModel>> components,
    std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty())
    Fail(ErrorKind::kConfig, "interpolation needs at least one component");
  if (weights_.size() != components_.size())
    Fail(ErrorKind::kConfig, "interpolation: ", weights_.size(), " weights for ",
         components_.size(), " components");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) Fail(ErrorKind::kConfig, "interpolation weights must be >= 0");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    Fail(ErrorKind::kConfig, "interpolation weights sum to ", FormatDouble(sum));
  for (const auto &c : components_)
    for (const std::string &w : c->vocab().words()) vocab_.Add(w);
  for (const auto &c : components_) {
    std::vector<int> map(vocab_.size());
    for (int id = 0; id < vocab_.size(); ++id) map[id] = c->vocab().Id(vocab_.Word(id));
    unk_shares_.push_back(
        static_cast<int>(std::count(map.begin(), map.end(), Vocabulary::kUnk)));
    id_maps_.push_back(std::move(map));
  }
}

double InterpolatedModel::ComponentProb(size_t i, int word, int h2, int h1) const {
  const auto &map = id_maps_[i];
  auto m = [&](int id) { return id == Vocabulary::kNone ? id : map[id]; };
  const double p = components_[i]->Prob(map[word], m(h2), m(h1));
  return map[word] == Vocabulary::kUnk ? p / unk_shares_[i] : p;
}

double InterpolatedModel::Prob(int word, int h2, int h1) const {
  if (word < 0 || word >= vocab_.size()) return 0.0;
  double p = 0.0;
  for (size_t i = 0; i < components_.size(); ++i)
    if (weights_[i] > 0.0) p += weights_[i] * ComponentProb(i, word, h2, h1);
  return p;
}

std::vector<double> SentenceLogProbs(const LanguageModel &lm, const Sentence &s) {
  std::vector<double> out;
  int h2 = Vocabulary::kNone, h1 = Vocabulary::kBos;
  for (const std::string &w : s) {
    const int id = lm.vocab().Id(w);
    out.push_back(lm.LogProb(id, h2, h1));
    h2 = h1;
    h1 = id;
  }
  out.push_back(lm.LogProb(Vocabulary::kEos, h2, h1));
  return out;
}

double Perplexity(const LanguageModel &lm, std::span<const Sentence> text) {
  if (text.empty()) Fail(ErrorKind::kData, "perplexity: empty text");
  double sum = 0.0;
  long count = 0;
  for (const Sentence &s : text) {
    for (double lp : SentenceLogProbs(lm, s)) {
      if (!std::isfinite(lp))
        Fail(ErrorKind::kData, "perplexity: a token has probability 0");
      sum += lp;
      ++count;
    }
  }
  return std::exp(-sum / count);
}

InterpolationFit FitInterpolationWeights(
    const std::vector<std::shared_ptr<const LanguageModel>> &components,
    std::span<const Sentence> dev_text, double tol, int max_iters) {
  if (components.empty())
    Fail(ErrorKind::kConfig, "interpolation needs at least one component");
  if (dev_text.empty()) Fail(ErrorKind::kData, "interpolation: empty dev text");
  const size_t k = components.size();
  const std::vector<double> uniform(k, 1.0 / k);
  // The mixture with uniform weights gives the shared id space.
  InterpolatedModel mix(components, uniform);

  std::vector<std::vector<double>> probs(k);  // probs[i][token]
  for (const Sentence &s : dev_text) {
    int h2 = Vocabulary::kNone, h1 = Vocabulary::kBos;
    std::vector<int> ids;
    for (const std::string &w : s) ids.push_back(mix.vocab().Id(w));
    ids.push_back(Vocabulary::kEos);
    for (int id : ids) {
      for (size_t i = 0; i < k; ++i) probs[i].push_back(mix.ComponentProb(i, id, h2, h1));
      h2 = h1;
      h1 = id;
    }
  }
  const size_t n = probs[0].size();

  InterpolationFit fit;
  fit.weights = uniform;
  auto mean_ll = [&](const std::vector<double> &w) {
    double ll = 0.0;
    for (size_t t = 0; t < n; ++t) {
      double p = 0.0;
      for (size_t i = 0; i < k; ++i) p += w[i] * probs[i][t];
      if (!(p > 0.0))
        Fail(ErrorKind::kData, "interpolation: a dev token has probability 0");
      ll += std::log(p);
    }
    return ll / n;
  };
  double ll = mean_ll(fit.weights);
  fit.log_likelihood.push_back(ll);
  fit.perplexity.push_back(std::exp(-ll));

  for (int iter = 0; iter < max_iters && k > 1; ++iter) {
    std::vector<double> next(k, 0.0);
    for (size_t t = 0; t < n; ++t) {
      double p = 0.0;
      for (size_t i = 0; i < k; ++i) p += fit.weights[i] * probs[i][t];
      for (size_t i = 0; i < k; ++i) next[i] += fit.weights[i] * probs[i][t] / p;
    }
    double sum = 0.0;
    for (double &w : next) sum += (w /= n);
    for (double &w : next) w /= sum;
    const double next_ll = mean_ll(next);
    fit.weights = next;
    fit.log_likelihood.push_back(next_ll);
    fit.perplexity.push_back(std::exp(-next_ll));
    fit.iterations = iter + 1;
    const double gain = next_ll - ll;
    ll = next_ll;
    if (gain < tol) break;
  }
  return fit;
}

// ---------------------------------------------------------------- ARPA

namespace {

std::string Log10Field(double p) {
  if (!(p > 0.0)) return "-99";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.7f", std::log10(p));
  return buf;
}

}  // namespace

std::string FormatArpa(const NGramModel &model) {
  const Vocabulary &v = model.vocab();
  std::vector<uint64_t> bigram_keys, trigram_keys;
  for (const auto &kv : model.bigrams()) bigram_keys.push_back(kv.first);
  for (const auto &kv : model.trigrams()) trigram_keys.push_back(kv.first);
  std::sort(bigram_keys.begin(), bigram_keys.end());
  std::sort(trigram_keys.begin(), trigram_keys.end());
  const uint64_t mask = (1u << 21) - 1;

  std::string out = "\n\\data\\\n";
  out += "ngram 1=" + std::to_string(v.size()) + "\n";
  if (model.order() >= 2) out += "ngram 2=" + std::to_string(bigram_keys.size()) + "\n";
  if (model.order() >= 3) out += "ngram 3=" + std::to_string(trigram_keys.size()) + "\n";

  out += "\n\\1-grams:\n";
  for (int w = 0; w < v.size(); ++w) {
    const auto &e = model.unigrams()[w];
    out += Log10Field(e.prob) + "\t" + v.Word(w);
    if (model.order() >= 2) out += "\t" + Log10Field(e.backoff);
    out += "\n";
  }
  if (model.order() >= 2) {
    out += "\n\\2-grams:\n";
    for (uint64_t key : bigram_keys) {
      const auto &e = model.bigrams().at(key);
      out += Log10Field(e.prob) + "\t" + v.Word(static_cast<int>(key >> 21)) + " " +
             v.Word(static_cast<int>(key & mask));
      if (model.order() >= 3 && e.backoff != 1.0) out += "\t" + Log10Field(e.backoff);
      out += "\n";
    }
  }
  if (model.order() >= 3) {
    out += "\n\\3-grams:\n";
    for (uint64_t key : trigram_keys) {
      out += Log10Field(model.trigrams().at(key)) + "\t" +
             v.Word(static_cast<int>(key >> 42)) + " " +
             v.Word(static_cast<int>((key >> 21) & mask)) + " " +
             v.Word(static_cast<int>(key & mask)) + "\n";
    }
  }
  out += "\n\\end\\\n";
  return out;
}

NGramModel ParseArpa(const std::string &text, const std::string &origin) {
  std::vector<std::string> lines = SplitString(text, '\n', false);
  std::map<int, long> declared;
  struct RawEntry {
    double log_prob;
    std::vector<std::string> words;
    bool has_bow;
    double log_bow;
  };
  std::map<int, std::vector<RawEntry>> sections;
  int state = -1;  // -1 before \data\, 0 in \data\, n in \n-grams:
  bool ended = false;
  size_t line_no = 0;
  auto error = [&](const auto &...args) {
    Fail(ErrorKind::kData, origin, ":", line_no, ": ", args...);
  };
  for (const std::string &raw : lines) {
    ++line_no;
    const std::string line = Trim(raw);
    if (line.empty() || ended) continue;
    if (line == "\\data\\") {
      state = 0;
      continue;
    }
    if (line == "\\end\\") {
      ended = true;
      continue;
    }
    if (line[0] == '\\') {
      int n = 0;
      char tail[16] = {0};
      if (std::sscanf(line.c_str(), "\\%d-grams%15s", &n, tail) != 2 ||
          std::string(tail) != ":" || n < 1)
        error("malformed section header '", line, "'");
      if (!declared.count(n)) error("section \\", n, "-grams: was not declared in \\data\\");
      if (sections.count(n)) error("duplicate section \\", n, "-grams:");
      sections[n];
      state = n;
      continue;
    }
    if (state == -1) continue;  // preamble
    if (state == 0) {
      int n = 0;
      long count = 0;
      if (std::sscanf(line.c_str(), "ngram %d=%ld", &n, &count) != 2 || n < 1 || count < 0)
        error("malformed \\data\\ line '", line, "'");
      if (n > 3) error("n-gram order ", n, " is not supported (max 3)");
      declared[n] = count;
      continue;
    }
    std::vector<std::string> fields;
    for (const std::string &f : SplitString(line, ' '))
      for (const std::string &g : SplitString(f, '\t')) fields.push_back(g);
    if (fields.size() != static_cast<size_t>(state) + 1 &&
        fields.size() != static_cast<size_t>(state) + 2)
      error("expected ", state, " words in \\", state, "-grams: entry '", line, "'");
    RawEntry e;
    try {
      e.log_prob = ParseDouble(fields[0], "log probability");
      e.has_bow = fields.size() == static_cast<size_t>(state) + 2;
      e.log_bow = e.has_bow ? ParseDouble(fields.back(), "backoff weight") : 0.0;
    } catch (const Error &err) {
      error(err.what());
    }
    e.words.assign(fields.begin() + 1, fields.begin() + 1 + state);
    sections[state].push_back(std::move(e));
  }
  if (declared.empty()) Fail(ErrorKind::kData, origin, ": missing \\data\\ section");
  if (!ended) Fail(ErrorKind::kData, origin, ": missing \\end\\ marker");
  const int order = declared.rbegin()->first;
  for (const auto &[n, count] : declared) {
    auto it = sections.find(n);
    const long found = it == sections.end() ? 0 : static_cast<long>(it->second.size());
    if (found != count)
      Fail(ErrorKind::kData, origin, ": section \\", n, "-grams: declares ", count,
           " entries but lists ", found);
  }

  Vocabulary vocab;
  for (const RawEntry &e : sections[1]) vocab.Add(e.words[0]);
  NGramModel model(vocab, order);
  auto p10 = [](double lp) { return lp <= -99.0 ? 0.0 : std::pow(10.0, lp); };
  auto id_of = [&](const std::string &w) {
    int id = vocab.Find(w);
    if (id < 0)
      Fail(ErrorKind::kData, origin, ": word '", w, "' is missing from \\1-grams:");
    return id;
  };
  for (const RawEntry &e : sections[1])
    model.SetUnigram(id_of(e.words[0]), p10(e.log_prob), std::pow(10.0, e.log_bow));
  for (const RawEntry &e : sections[2])
    model.SetBigram(id_of(e.words[0]), id_of(e.words[1]), p10(e.log_prob),
                    std::pow(10.0, e.log_bow));
  for (const RawEntry &e : sections[3])
    model.SetTrigram(id_of(e.words[0]), id_of(e.words[1]), id_of(e.words[2]),
                     p10(e.log_prob));
  return model;
}

void WriteArpa(const NGramModel &model, const std::filesystem::path &path) {
  WriteTextFileAtomic(path, FormatArpa(model));
}

NGramModel ReadArpa(const std::filesystem::path &path) {
  return ParseArpa(ReadTextFile(path), path.string());
}

namespace {
constexpr const char *kMixtureHeader = "#sstk-lm-mixture v1";
}

void WriteMixture(const std::vector<std::filesystem::path> &arpa_paths,
                  std::span<const double> weights, const std::filesystem::path &path) {
  if (arpa_paths.size() != weights.size())
    Fail(ErrorKind::kConfig, "mixture: ", weights.size(), " weights for ",
         arpa_paths.size(), " components");
  std::string out = std::string(kMixtureHeader) + "\n";
  for (size_t i = 0; i < weights.size(); ++i)
    out += FormatDouble(weights[i]) + "\t" + arpa_paths[i].string() + "\n";
  WriteTextFileAtomic(path, out);
}

std::shared_ptr<const LanguageModel> LoadLanguageModel(const std::filesystem::path &path) {
  const std::string text = ReadTextFile(path);
  if (text.rfind(kMixtureHeader, 0) != 0)
    return std::make_shared<NGramModel>(ParseArpa(text, path.string()));
  std::vector<std::shared_ptr<const LanguageModel>> comps;
  std::vector<double> weights;
  auto lines = SplitString(text, '\n');
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string line = Trim(lines[i]);
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      Fail(ErrorKind::kData, path.string(), ":", i + 1, ": expected weight<TAB>path");
    weights.push_back(ParseDouble(line.substr(0, tab), "mixture weight"));
    std::filesystem::path p = line.substr(tab + 1);
    if (p.is_relative()) p = path.parent_path() / p;
    comps.push_back(std::make_shared<NGramModel>(ReadArpa(p)));
  }
  return std::make_shared<InterpolatedModel>(std::move(comps), std::move(weights));
}

std::vector<Sentence> ReadSentences(const std::filesystem::path &path) {
  std::vector<Sentence> out;
  for (const std::string &line : SplitString(ReadTextFile(path), '\n')) {
    std::vector<std::string> words;
    for (const std::string &f : SplitString(line, ' '))
      for (const std::string &g : SplitString(f, '\t')) {
        std::string t = Trim(g);
        if (!t.empty()) words.push_back(t);
      }
    if (!words.empty()) out.push_back(std::move(words));
  }
  return out;
}

void WriteSentences(std::span<const Sentence> text, const std::filesystem::path &path) {
  std::string out;
  for (const Sentence &s : text) out += Join(s, " ") + "\n";
  WriteTextFileAtomic(path, out);
}

}  // namespace sstk
