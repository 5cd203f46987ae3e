// sstk/dsp.h

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

#ifndef SSTK_DSP_H_
#define SSTK_DSP_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sstk/corpus.h"

namespace sstk {

struct AudioBuffer {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = 8000;

  double Duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Row-major frames x dim matrix.
struct FeatureMatrix {
  int frames = 0;
  int dim = 0;
  std::vector<double> values;
  double frame_shift = 0.010;
  double frame_length = 0.025;

  std::span<const double> Row(int i) const {
    return {values.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)};
  }
  std::span<double> Row(int i) {
    return {values.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)};
  }
};

struct MfccConfig {
  int n_mels = 23;
  int n_coeffs = 13;
  double pre_emphasis = 0.97;
  double frame_length = 0.025;  // seconds
  double frame_shift = 0.010;   // seconds
  double log_floor = 1e-10;
  double low_freq = 20.0;
  /// Upper filterbank edge in Hz; <= 0 means Nyquist.
  double high_freq = 0.0;
  /// Audio at any other rate is rate-converted before feature extraction.
  int sample_rate = 8000;

  void Validate() const;
  int WindowSamples(int rate) const;
  int HopSamples(int rate) const;
};

/// 1 + floor((n - window) / hop) for n >= window, else 0.
int NumFrames(long n_samples, int window, int hop);

AudioBuffer ReadWav(const std::filesystem::path &path);
void WriteWav(const AudioBuffer &buf, const std::filesystem::path &path);
/// In-memory forms of the above, used by the file versions.
AudioBuffer DecodeWav(const std::string &bytes, const std::string &origin);
std::string EncodeWav(const AudioBuffer &buf);

/// Speed perturbation: output has round(N / factor) samples at the same
/// nominal rate, so every frequency is scaled by `factor`. Linear
/// interpolation.
AudioBuffer Resample(const AudioBuffer &buf, double factor);
/// Rate conversion: content frequencies are preserved, output is at
/// `target_rate`.
AudioBuffer ConvertRate(const AudioBuffer &buf, int target_rate);

/// Maps frame labels of an utterance onto the frame grid of its copy
/// perturbed by `factor` (nearest original frame of each new frame centre).
std::vector<int> RescaleFrameLabels(std::span<const int> labels, double factor,
                                    int new_frames, int window, int hop);

/// One record per (utterance, factor), id suffixed "-spF". Perturbed audio is
/// written under `audio_dir`; factor 1.0 reuses the original file.
Manifest SpeedPerturbManifest(const Manifest &m, std::span<const double> factors,
                              const std::filesystem::path &audio_dir,
                              const MfccConfig &framing);

std::string SpeedSuffix(double factor);

/// Precomputed mel filterbank and DCT for one (config, sample rate).
class MfccComputer {
 public:
  MfccComputer(const MfccConfig &cfg, int sample_rate);
  FeatureMatrix Compute(std::span<const double> samples) const;
  const MfccConfig &config() const { return cfg_; }

 private:
  MfccConfig cfg_;
  int sample_rate_;
  int window_;
  int hop_;
  int fft_size_;
  std::vector<double> hamming_;
  // Per mel bin: first FFT bin and weights.
  std::vector<std::pair<int, std::vector<double>>> mel_bins_;
  std::vector<double> dct_;  // n_coeffs x n_mels, row-major
};

FeatureMatrix ComputeMfcc(const AudioBuffer &buf, const MfccConfig &cfg);

/// Debug dump: int32 frames, int32 dim, then float32 values, little-endian.
void WriteFeatureMatrix(const FeatureMatrix &m, const std::filesystem::path &path);
FeatureMatrix ReadFeatureMatrix(const std::filesystem::path &path);

/// Supplies features for utterance records.
class FeatureSource {
 public:
  virtual ~FeatureSource() = default;
  virtual const FeatureMatrix &Features(const UtteranceRecord &rec) = 0;
  virtual int dim() const = 0;
};

/// Reads WAV audio, converts the rate if needed and computes MFCCs; caches
/// by audio path.
class WavMfccSource : public FeatureSource {
 public:
  explicit WavMfccSource(const MfccConfig &cfg);
  const FeatureMatrix &Features(const UtteranceRecord &rec) override;
  int dim() const override { return cfg_.n_coeffs; }
  const MfccConfig &config() const { return cfg_; }

 private:
  MfccConfig cfg_;
  MfccComputer computer_;
  std::unordered_map<std::string, FeatureMatrix> cache_;
};

/// Features supplied directly, keyed by utterance id.
class InMemoryFeatureSource : public FeatureSource {
 public:
  explicit InMemoryFeatureSource(int dim) : dim_(dim) {}
  void Add(const std::string &id, FeatureMatrix m) { table_[id] = std::move(m); }
  const FeatureMatrix &Features(const UtteranceRecord &rec) override;
  int dim() const override { return dim_; }

 private:
  int dim_;
  std::map<std::string, FeatureMatrix> table_;
};

}  // namespace sstk

#endif  // SSTK_DSP_H_
