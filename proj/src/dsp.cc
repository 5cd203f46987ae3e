// dsp.cc

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

#include "sstk/dsp.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>

#include <unsupported/Eigen/FFT>

#include "sstk/common.h"

namespace sstk {

// ---------------------------------------------------------------- WAV

namespace {

void PutU32(std::string *s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutU16(std::string *s, uint16_t v) {
  s->push_back(static_cast<char>(v & 0xff));
  s->push_back(static_cast<char>(v >> 8));
}
uint32_t GetU32(const std::string &s, size_t off) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[off + i]);
  return v;
}
uint16_t GetU16(const std::string &s, size_t off) {
  return static_cast<uint16_t>(static_cast<unsigned char>(s[off]) |
                               (static_cast<unsigned char>(s[off + 1]) << 8));
}

}  // namespace

std::string EncodeWav(const AudioBuffer &buf) {
  if (buf.sample_rate <= 0) Fail(ErrorKind::kData, "wav: sample rate must be > 0");
  const uint32_t data_bytes = static_cast<uint32_t>(buf.samples.size() * 2);
  std::string s;
  s.reserve(44 + data_bytes);
  s += "RIFF";
  PutU32(&s, 36 + data_bytes);
  s += "WAVEfmt ";
  PutU32(&s, 16);
  PutU16(&s, 1);  // PCM
  PutU16(&s, 1);  // mono
  PutU32(&s, static_cast<uint32_t>(buf.sample_rate));
  PutU32(&s, static_cast<uint32_t>(buf.sample_rate) * 2);
  PutU16(&s, 2);
  PutU16(&s, 16);
  s += "data";
  PutU32(&s, data_bytes);
  for (double x : buf.samples) {
    if (!std::isfinite(x)) Fail(ErrorKind::kData, "wav: non-finite sample");
    long q = std::lround(x * 32768.0);
    q = std::clamp(q, -32768L, 32767L);
    PutU16(&s, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  return s;
}

AudioBuffer DecodeWav(const std::string &bytes, const std::string &origin) {
  auto malformed = [&](const char *why) {
    Fail(ErrorKind::kData, "wav ", origin, ": malformed file (", why, ")");
  };
  if (bytes.size() < 12) malformed("truncated RIFF header");
  if (bytes.compare(0, 4, "RIFF") != 0 || bytes.compare(8, 4, "WAVE") != 0)
    malformed("not a RIFF/WAVE file");
  size_t off = 12;
  bool have_fmt = false;
  int rate = 0;
  while (off + 8 <= bytes.size()) {
    const std::string id = bytes.substr(off, 4);
    const uint32_t size = GetU32(bytes, off + 4);
    const size_t body = off + 8;
    if (id == "fmt ") {
      if (size < 16 || body + 16 > bytes.size()) malformed("truncated fmt chunk");
      const uint16_t format = GetU16(bytes, body);
      const uint16_t channels = GetU16(bytes, body + 2);
      rate = static_cast<int>(GetU32(bytes, body + 4));
      const uint16_t bits = GetU16(bytes, body + 14);
      if (format != 1 || channels != 1 || bits != 16)
        Fail(ErrorKind::kData, "wav ", origin,
             ": unsupported format (need PCM 16-bit mono; got format ", format,
             ", ", channels, " channels, ", bits, " bits)");
      if (rate <= 0) malformed("zero sample rate");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) malformed("data chunk before fmt chunk");
      if (body + size > bytes.size() || size % 2 != 0) malformed("truncated data chunk");
      AudioBuffer buf;
      buf.sample_rate = rate;
      buf.samples.resize(size / 2);
      for (size_t i = 0; i < buf.samples.size(); ++i)
        buf.samples[i] = static_cast<int16_t>(GetU16(bytes, body + 2 * i)) / 32768.0;
      return buf;
    }
    off = body + size + (size & 1);
  }
  malformed(have_fmt ? "missing data chunk" : "missing fmt chunk");
  return {};
}

AudioBuffer ReadWav(const std::filesystem::path &path) {
  return DecodeWav(ReadTextFile(path), path.string());
}

void WriteWav(const AudioBuffer &buf, const std::filesystem::path &path) {
  const std::string bytes = EncodeWav(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kData, "wav: cannot open ", path.string(), " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorKind::kData, "wav: write failed for ", path.string());
}

// ---------------------------------------------------------------- resampling

namespace {

// Linear interpolation of x at fractional position p, holding the last sample.
double Interp(const std::vector<double> &x, double p) {
  const size_t n = x.size();
  if (p <= 0.0) return x[0];
  size_t i = static_cast<size_t>(p);
  if (i + 1 >= n) return x[n - 1];
  double frac = p - static_cast<double>(i);
  return x[i] * (1.0 - frac) + x[i + 1] * frac;
}

}  // namespace

AudioBuffer Resample(const AudioBuffer &buf, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    Fail(ErrorKind::kConfig, "resample: factor must be > 0, got ", factor);
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  if (factor == 1.0) {
    out.samples = buf.samples;
    return out;
  }
  const long n_out = std::lround(static_cast<double>(buf.samples.size()) / factor);
  out.samples.resize(n_out);
  if (buf.samples.empty()) return out;
  for (long j = 0; j < n_out; ++j) out.samples[j] = Interp(buf.samples, j * factor);
  return out;
}

AudioBuffer ConvertRate(const AudioBuffer &buf, int target_rate) {
  if (target_rate <= 0)
    Fail(ErrorKind::kConfig, "resample: target rate must be > 0, got ", target_rate);
  if (target_rate == buf.sample_rate) return buf;
  AudioBuffer out = Resample(buf, static_cast<double>(buf.sample_rate) / target_rate);
  out.sample_rate = target_rate;
  return out;
}

std::vector<int> RescaleFrameLabels(std::span<const int> labels, double factor,
                                    int new_frames, int window, int hop) {
  std::vector<int> out(new_frames);
  if (labels.empty()) return out;
  const long last = static_cast<long>(labels.size()) - 1;
  for (int j = 0; j < new_frames; ++j) {
    const double centre = (static_cast<double>(j) * hop + window / 2.0) * factor;
    long src = std::lround((centre - window / 2.0) / hop);
    out[j] = labels[std::clamp(src, 0L, last)];
  }
  return out;
}

std::string SpeedSuffix(double factor) { return "-sp" + FormatDouble(factor); }

Manifest SpeedPerturbManifest(const Manifest &m, std::span<const double> factors,
                              const std::filesystem::path &audio_dir,
                              const MfccConfig &framing) {
  if (factors.empty()) Fail(ErrorKind::kConfig, "perturb: no speed factors given");
  for (double f : factors)
    if (!(f > 0.0)) Fail(ErrorKind::kConfig, "perturb: factor must be > 0, got ", f);
  bool need_dir = false;
  for (double f : factors) need_dir |= (f != 1.0);
  if (need_dir) {
    std::error_code ec;
    std::filesystem::create_directories(audio_dir, ec);
    if (ec) Fail(ErrorKind::kData, "perturb: cannot create ", audio_dir.string());
  }

  std::vector<UtteranceRecord> out;
  for (const UtteranceRecord &rec : m.records()) {
    AudioBuffer audio;
    bool loaded = false;
    for (double f : factors) {
      UtteranceRecord r = rec;
      r.id = rec.id + SpeedSuffix(f);
      r.speed_factor = rec.speed_factor * f;
      if (f != 1.0) {
        if (!loaded) {
          audio = ReadWav(rec.audio);
          loaded = true;
        }
        AudioBuffer perturbed = Resample(audio, f);
        r.audio = (audio_dir / (r.id + ".wav")).string();
        WriteWav(perturbed, r.audio);
        if (rec.frame_labels) {
          const int window = framing.WindowSamples(perturbed.sample_rate);
          const int hop = framing.HopSamples(perturbed.sample_rate);
          r.frame_labels = RescaleFrameLabels(
              *rec.frame_labels, f,
              NumFrames(static_cast<long>(perturbed.samples.size()), window, hop),
              window, hop);
          r.transcript = CollapseToTokens(*r.frame_labels);
        }
      }
      out.push_back(std::move(r));
    }
  }
  return Manifest(m.name() + "-sp", std::move(out));
}

// ---------------------------------------------------------------- MFCC

void MfccConfig::Validate() const {
  if (n_mels < 1 || n_coeffs < 1 || n_coeffs > n_mels)
    Fail(ErrorKind::kConfig, "mfcc: need 1 <= n_coeffs <= n_mels (got ", n_coeffs,
         ", ", n_mels, ")");
  if (!(frame_shift > 0.0) || frame_shift > frame_length)
    Fail(ErrorKind::kConfig, "mfcc: need 0 < frame_shift <= frame_length");
  if (!(log_floor > 0.0)) Fail(ErrorKind::kConfig, "mfcc: log_floor must be > 0");
  if (sample_rate <= 0) Fail(ErrorKind::kConfig, "mfcc: sample_rate must be > 0");
}

int MfccConfig::WindowSamples(int rate) const {
  return static_cast<int>(std::lround(frame_length * rate));
}

int MfccConfig::HopSamples(int rate) const {
  return static_cast<int>(std::lround(frame_shift * rate));
}

int NumFrames(long n_samples, int window, int hop) {
  if (window <= 0 || hop <= 0) Fail(ErrorKind::kConfig, "bad frame geometry");
  if (n_samples < window) return 0;
  return static_cast<int>(1 + (n_samples - window) / hop);
}

namespace {
double MelScale(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }
}  // namespace

MfccComputer::MfccComputer(const MfccConfig &cfg, int sample_rate)
    : cfg_(cfg), sample_rate_(sample_rate) {
  cfg_.Validate();
  window_ = cfg_.WindowSamples(sample_rate);
  hop_ = cfg_.HopSamples(sample_rate);
  if (window_ < 2 || hop_ < 1) Fail(ErrorKind::kConfig, "mfcc: window too short");
  fft_size_ = 1;
  while (fft_size_ < window_) fft_size_ *= 2;

  hamming_.resize(window_);
  for (int i = 0; i < window_; ++i)
    hamming_[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (window_ - 1));

  const double nyquist = sample_rate / 2.0;
  const double high = cfg_.high_freq > 0.0 ? cfg_.high_freq : nyquist;
  if (high > nyquist + 1e-9 || cfg_.low_freq < 0.0 || cfg_.low_freq >= high)
    Fail(ErrorKind::kConfig, "mfcc: filterbank edges [", cfg_.low_freq, ", ", high,
         "] Hz must lie within [0, Nyquist=", nyquist, "]");
  const double mel_lo = MelScale(cfg_.low_freq), mel_hi = MelScale(high);
  const double mel_step = (mel_hi - mel_lo) / (cfg_.n_mels + 1);
  const int n_bins = fft_size_ / 2 + 1;
  mel_bins_.resize(cfg_.n_mels);
  for (int m = 0; m < cfg_.n_mels; ++m) {
    const double left = mel_lo + m * mel_step, centre = left + mel_step,
                 right = centre + mel_step;
    int first = -1;
    std::vector<double> weights;
    for (int b = 0; b < n_bins; ++b) {
      const double mel = MelScale(static_cast<double>(b) * sample_rate / fft_size_);
      double w = 0.0;
      if (mel > left && mel < right)
        w = mel <= centre ? (mel - left) / (centre - left)
                          : (right - mel) / (right - centre);
      if (w > 0.0) {
        if (first < 0) first = b;
        weights.resize(b - first + 1, 0.0);
        weights[b - first] = w;
      }
    }
    if (first < 0)
      Fail(ErrorKind::kConfig, "mfcc: mel filter ", m,
           " is empty; use fewer filters or a longer window");
    mel_bins_[m] = {first, std::move(weights)};
  }

  dct_.resize(static_cast<size_t>(cfg_.n_coeffs) * cfg_.n_mels);
  const double m = cfg_.n_mels;
  for (int k = 0; k < cfg_.n_coeffs; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
    for (int j = 0; j < cfg_.n_mels; ++j)
      dct_[static_cast<size_t>(k) * cfg_.n_mels + j] =
          scale * std::cos(M_PI * k * (j + 0.5) / m);
  }
}

FeatureMatrix MfccComputer::Compute(std::span<const double> samples) const {
  FeatureMatrix out;
  out.frame_shift = cfg_.frame_shift;
  out.frame_length = cfg_.frame_length;
  out.dim = cfg_.n_coeffs;
  out.frames = NumFrames(static_cast<long>(samples.size()), window_, hop_);
  out.values.resize(static_cast<size_t>(out.frames) * out.dim);

  Eigen::FFT<double> fft;
  std::vector<double> frame(fft_size_);
  std::vector<std::complex<double>> spectrum;
  std::vector<double> power(fft_size_ / 2 + 1), logmel(cfg_.n_mels);
  for (int t = 0; t < out.frames; ++t) {
    const double *x = samples.data() + static_cast<size_t>(t) * hop_;
    std::fill(frame.begin(), frame.end(), 0.0);
    std::copy(x, x + window_, frame.begin());
    // Pre-emphasis within the frame; the first sample is emphasised against
    // itself so that frames are independent of their left neighbours.
    for (int i = window_ - 1; i > 0; --i) frame[i] -= cfg_.pre_emphasis * frame[i - 1];
    frame[0] -= cfg_.pre_emphasis * frame[0];
    for (int i = 0; i < window_; ++i) frame[i] *= hamming_[i];

    fft.fwd(spectrum, frame);
    for (size_t b = 0; b < power.size(); ++b) power[b] = std::norm(spectrum[b]);

    for (int m = 0; m < cfg_.n_mels; ++m) {
      const auto &[first, weights] = mel_bins_[m];
      double e = 0.0;
      for (size_t i = 0; i < weights.size(); ++i) e += weights[i] * power[first + i];
      logmel[m] = std::log(std::max(e, cfg_.log_floor));
    }
    std::span<double> row = out.Row(t);
    for (int k = 0; k < cfg_.n_coeffs; ++k) {
      const double *d = dct_.data() + static_cast<size_t>(k) * cfg_.n_mels;
      double c = 0.0;
      for (int j = 0; j < cfg_.n_mels; ++j) c += d[j] * logmel[j];
      row[k] = c;
    }
  }
  return out;
}

FeatureMatrix ComputeMfcc(const AudioBuffer &buf, const MfccConfig &cfg) {
  return MfccComputer(cfg, buf.sample_rate).Compute(buf.samples);
}

void WriteFeatureMatrix(const FeatureMatrix &m, const std::filesystem::path &path) {
  std::string s;
  PutU32(&s, static_cast<uint32_t>(m.frames));
  PutU32(&s, static_cast<uint32_t>(m.dim));
  for (double v : m.values) {
    float f = static_cast<float>(v);
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    PutU32(&s, bits);
  }
  WriteTextFileAtomic(path, s);
}

FeatureMatrix ReadFeatureMatrix(const std::filesystem::path &path) {
  const std::string s = ReadTextFile(path);
  if (s.size() < 8) Fail(ErrorKind::kData, "feature file ", path.string(), " truncated");
  FeatureMatrix m;
  m.frames = static_cast<int>(GetU32(s, 0));
  m.dim = static_cast<int>(GetU32(s, 4));
  const size_t n = static_cast<size_t>(m.frames) * m.dim;
  if (s.size() != 8 + 4 * n)
    Fail(ErrorKind::kData, "feature file ", path.string(), " has wrong size");
  m.values.resize(n);
  for (size_t i = 0; i < n; ++i) {
    uint32_t bits = GetU32(s, 8 + 4 * i);
    float f;
    std::memcpy(&f, &bits, 4);
    m.values[i] = f;
  }
  return m;
}

// ---------------------------------------------------------------- sources

WavMfccSource::WavMfccSource(const MfccConfig &cfg)
    : cfg_(cfg), computer_(cfg, cfg.sample_rate) {}

const FeatureMatrix &WavMfccSource::Features(const UtteranceRecord &rec) {
  auto it = cache_.find(rec.audio);
  if (it != cache_.end()) return it->second;
  AudioBuffer audio = ConvertRate(ReadWav(rec.audio), cfg_.sample_rate);
  return cache_.emplace(rec.audio, computer_.Compute(audio.samples)).first->second;
}

const FeatureMatrix &InMemoryFeatureSource::Features(const UtteranceRecord &rec) {
  auto it = table_.find(rec.id);
  if (it == table_.end())
    Fail(ErrorKind::kData, "no features for utterance ", rec.id);
  return it->second;
}

}  // namespace sstk
