// tests/dsp-test.cc

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

#include <cmath>

#include <gtest/gtest.h>

#include "sstk/corpus.h"
#include "sstk/dsp.h"
#include "test-util.h"

namespace sstk {
namespace {

using testing::DftPeakHz;
using testing::Sine;
using testing::TempDir;

void PutU16(std::string *s, size_t off, uint16_t v) {
  (*s)[off] = static_cast<char>(v & 0xff);
  (*s)[off + 1] = static_cast<char>(v >> 8);
}

AudioBuffer Noise(long n, uint64_t seed, double amp = 0.3) {
  Rng rng(seed);
  AudioBuffer b;
  b.samples.resize(n);
  for (double &x : b.samples) x = amp * (rng.Uniform() * 2 - 1);
  return b;
}

TEST(Wav, SineRoundTrip) {
  TempDir dir("wav");
  AudioBuffer b = Sine(1000, 0.5, 8000);
  ASSERT_EQ(b.samples.size(), 4000u);
  WriteWav(b, dir / "s.wav");
  AudioBuffer r = ReadWav(dir / "s.wav");
  ASSERT_EQ(r.samples.size(), 4000u);
  EXPECT_EQ(r.sample_rate, 8000);
  double max_err = 0;
  for (size_t i = 0; i < 4000; i++) max_err = std::max(max_err, std::abs(r.samples[i] - b.samples[i]));
  EXPECT_LE(max_err, 1.0 / 32768);
}

TEST(Wav, EmptyBuffer) {
  AudioBuffer b;
  AudioBuffer r = DecodeWav(EncodeWav(b), "empty");
  EXPECT_EQ(r.samples.size(), 0u);
  EXPECT_EQ(r.sample_rate, 8000);
}

TEST(Wav, MalformedInputs) {
  std::string good = EncodeWav(Sine(440, 0.01, 8000));
  for (size_t cut : {0ul, 5ul, 11ul, 20ul, 30ul}) {
    try {
      DecodeWav(good.substr(0, cut), "cut");
      FAIL() << cut;
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kData);
    }
  }
  std::string junk = good;
  junk[0] = 'X';
  EXPECT_THROW(DecodeWav(junk, "junk"), Error);
}

TEST(Wav, UnsupportedEncodings) {
  std::string good = EncodeWav(Sine(440, 0.01, 8000));
  // fmt chunk body starts at byte 20.
  std::string stereo = good;
  PutU16(&stereo, 22, 2);
  std::string floating = good;
  PutU16(&floating, 20, 3);
  std::string eight_bit = good;
  PutU16(&eight_bit, 34, 8);
  for (const std::string *s : {&stereo, &floating, &eight_bit}) {
    try {
      DecodeWav(*s, "x");
      FAIL();
    } catch (const Error &e) {
      EXPECT_NE(std::string(e.what()).find("unsupported"), std::string::npos) << e.what();
    }
  }
}

TEST(Wav, RejectsNonFinite) {
  AudioBuffer b;
  b.samples = {0.0, std::nan("")};
  EXPECT_THROW(EncodeWav(b), Error);
}

TEST(Resample, Identity) {
  AudioBuffer b = Noise(1234, 1);
  AudioBuffer r = Resample(b, 1.0);
  EXPECT_EQ(r.samples, b.samples);
  EXPECT_EQ(r.sample_rate, b.sample_rate);
}

TEST(Resample, LengthExample) {
  AudioBuffer b = Noise(1000, 2);
  EXPECT_EQ(Resample(b, 1.1).samples.size(), 909u);
  EXPECT_EQ(Resample(b, 0.9).samples.size(), 1111u);
  EXPECT_THROW(Resample(b, 0.0), Error);
  EXPECT_THROW(Resample(b, -1.0), Error);
}

TEST(Resample, LengthFormulaProperty) {
  Rng rng(77);
  for (int t = 0; t < 200; t++) {
    long n = rng.UniformRange(0, 5000);
    double f = rng.Uniform(0.5, 2.0);
    AudioBuffer r = Resample(Noise(n, t), f);
    EXPECT_EQ(static_cast<long>(r.samples.size()), std::lround(n / f)) << n << " " << f;
    AudioBuffer back = Resample(r, 1.0 / f);
    EXPECT_LE(std::abs(static_cast<long>(back.samples.size()) - n), 1);
  }
}

TEST(Resample, SpectralPeakMoves) {
  AudioBuffer b = Sine(100, 1.0, 8000);
  AudioBuffer r = Resample(b, 1.1);
  EXPECT_EQ(r.sample_rate, 8000);
  double peak = DftPeakHz(r, 300, 0.5);
  EXPECT_NEAR(peak, 110.0, 2.0);
  EXPECT_NEAR(DftPeakHz(Resample(b, 0.9), 300, 0.5), 90.0, 2.0);
}

TEST(Resample, ConvertRatePreservesFrequency) {
  AudioBuffer b = Sine(300, 0.5, 16000);
  AudioBuffer r = ConvertRate(b, 8000);
  EXPECT_EQ(r.sample_rate, 8000);
  EXPECT_EQ(r.samples.size(), 4000u);
  EXPECT_NEAR(DftPeakHz(r, 1000, 1.0), 300.0, 2.0);
}

TEST(Mfcc, NumFramesFormulaProperty) {
  Rng rng(5);
  for (int t = 0; t < 500; t++) {
    long n = rng.UniformRange(0, 3000);
    int window = static_cast<int>(rng.UniformRange(1, 400));
    int hop = static_cast<int>(rng.UniformRange(1, window));
    int brute = 0;
    for (long s = 0; s + window <= n; s += hop) brute++;
    EXPECT_EQ(NumFrames(n, window, hop), brute);
  }
}

TEST(Mfcc, FrameCountAndDim) {
  MfccConfig cfg;
  FeatureMatrix m = ComputeMfcc(Noise(8000, 3), cfg);
  EXPECT_EQ(m.frames, 98);
  EXPECT_EQ(m.dim, 13);
  for (double v : m.values) EXPECT_TRUE(std::isfinite(v));
  FeatureMatrix tiny = ComputeMfcc(Noise(150, 3), cfg);
  EXPECT_EQ(tiny.frames, 0);
}

TEST(Mfcc, SilenceGivesConstantFrames) {
  MfccConfig cfg;
  AudioBuffer z;
  z.samples.assign(4000, 0.0);
  FeatureMatrix m = ComputeMfcc(z, cfg);
  ASSERT_GT(m.frames, 1);
  for (int i = 1; i < m.frames; i++)
    for (int d = 0; d < m.dim; d++) EXPECT_EQ(m.Row(i)[d], m.Row(0)[d]);
}

TEST(Mfcc, GainOnlyMovesC0) {
  MfccConfig cfg;
  AudioBuffer b = Noise(4000, 9, 0.2);
  AudioBuffer b2 = b;
  for (double &x : b2.samples) x *= 2;
  FeatureMatrix m1 = ComputeMfcc(b, cfg), m2 = ComputeMfcc(b2, cfg);
  ASSERT_EQ(m1.frames, m2.frames);
  for (int i = 0; i < m1.frames; i++) {
    EXPECT_GT(std::abs(m2.Row(i)[0] - m1.Row(i)[0]), 1.0);
    for (int d = 1; d < m1.dim; d++) EXPECT_NEAR(m1.Row(i)[d], m2.Row(i)[d], 1e-6);
  }
}

TEST(Mfcc, HopShiftDropsOneFrame) {
  MfccConfig cfg;
  AudioBuffer b = Noise(6000, 10);
  AudioBuffer shifted = b;
  const int hop = cfg.HopSamples(8000);
  shifted.samples.erase(shifted.samples.begin(), shifted.samples.begin() + hop);
  FeatureMatrix m = ComputeMfcc(b, cfg), s = ComputeMfcc(shifted, cfg);
  ASSERT_EQ(s.frames, m.frames - 1);
  for (int i = 0; i < s.frames; i++)
    for (int d = 0; d < m.dim; d++) EXPECT_NEAR(s.Row(i)[d], m.Row(i + 1)[d], 1e-6);
}

TEST(Mfcc, ToneMovesEnergy) {
  // Different tones must give clearly different cepstra.
  MfccConfig cfg;
  FeatureMatrix a = ComputeMfcc(Sine(500, 0.2, 8000), cfg);
  FeatureMatrix b = ComputeMfcc(Sine(2500, 0.2, 8000), cfg);
  double diff = 0;
  for (int d = 1; d < a.dim; d++) diff += std::abs(a.Row(5)[d] - b.Row(5)[d]);
  EXPECT_GT(diff, 1.0);
}

TEST(Mfcc, ConfigValidation) {
  MfccConfig cfg;
  cfg.n_coeffs = 30;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = MfccConfig();
  cfg.frame_shift = 0.03;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = MfccConfig();
  cfg.high_freq = 6000;
  EXPECT_THROW(MfccComputer(cfg, 8000), Error);
}

TEST(Mfcc, FeatureDumpRoundTrip) {
  TempDir dir("feat");
  FeatureMatrix m = ComputeMfcc(Noise(2000, 4), MfccConfig());
  WriteFeatureMatrix(m, dir / "f.bin");
  FeatureMatrix r = ReadFeatureMatrix(dir / "f.bin");
  ASSERT_EQ(r.frames, m.frames);
  ASSERT_EQ(r.dim, m.dim);
  for (size_t i = 0; i < m.values.size(); i++)
    EXPECT_NEAR(r.values[i], m.values[i], 1e-4 * (1 + std::abs(m.values[i])));
}

TEST(Perturb, RescaleFrameLabels) {
  std::vector<int> labels{0, 0, 1, 1, 1, 1, 0, 0, 2, 2, 0};
  auto same = RescaleFrameLabels(labels, 1.0, 11, 200, 80);
  EXPECT_EQ(same, labels);
  auto fast = RescaleFrameLabels(labels, 1.1, 10, 200, 80);
  EXPECT_EQ(fast.size(), 10u);
  EXPECT_EQ(fast.front(), 0);
  EXPECT_EQ(fast.back(), 0);
}

TEST(Perturb, ManifestTriples) {
  TempDir dir("perturb");
  SynthSpec spec;
  Manifest m = GenerateCorpus(spec, 5, Domain::kInDomain, dir / "orig", "u");
  std::vector<double> factors{0.9, 1.0, 1.1};
  MfccConfig cfg;
  Manifest p = SpeedPerturbManifest(m, factors, dir / "sp", cfg);
  ASSERT_EQ(p.size(), 3 * m.size());
  for (const auto &rec : m.records()) {
    const long n = static_cast<long>(ReadWav(rec.audio).samples.size());
    for (double f : factors) {
      const UtteranceRecord *q = p.Find(rec.id + SpeedSuffix(f));
      ASSERT_NE(q, nullptr);
      EXPECT_DOUBLE_EQ(q->speed_factor, f);
      EXPECT_EQ(q->transcript, rec.transcript);
      AudioBuffer a = ReadWav(q->audio);
      EXPECT_LE(std::abs(static_cast<double>(a.samples.size()) - n / f), 1.0);
      ASSERT_TRUE(q->frame_labels);
      EXPECT_EQ(static_cast<int>(q->frame_labels->size()),
                NumFrames(static_cast<long>(a.samples.size()), cfg.WindowSamples(8000),
                          cfg.HopSamples(8000)));
    }
    EXPECT_EQ(p.Find(rec.id + SpeedSuffix(1.0))->audio, rec.audio);
  }
  std::vector<double> none;
  EXPECT_THROW(SpeedPerturbManifest(m, none, dir / "x", cfg), Error);
  std::vector<double> neg{-1.0};
  EXPECT_THROW(SpeedPerturbManifest(m, neg, dir / "x", cfg), Error);
}

TEST(Features, WavMfccSourceCaches) {
  TempDir dir("fsrc");
  AudioBuffer b = Noise(3000, 1);
  WriteWav(b, dir / "a.wav");
  UtteranceRecord r;
  r.id = "a";
  r.audio = (dir / "a.wav").string();
  WavMfccSource src{MfccConfig()};
  const FeatureMatrix &f1 = src.Features(r);
  const FeatureMatrix &f2 = src.Features(r);
  EXPECT_EQ(&f1, &f2);
  EXPECT_EQ(f1.dim, src.dim());
  UtteranceRecord missing = r;
  missing.audio = (dir / "none.wav").string();
  EXPECT_THROW(src.Features(missing), Error);
}

}  // namespace
}  // namespace sstk
