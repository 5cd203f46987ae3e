// sstk/common.h

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

#ifndef SSTK_COMMON_H_
#define SSTK_COMMON_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sstk {

/// Error categories. The numeric values are the CLI exit codes and the C API
/// status codes, so keep them in sync with sstk-c.h.
enum class ErrorKind : int {
  kConfig = 1,    // usage or configuration problem
  kPhase = 2,     // a pipeline phase failed or its prerequisites are missing
  kData = 3,      // malformed, missing or inconsistent data / file I/O
  kInternal = 4,  // anything else
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

template <typename... Args>
std::string Concat(const Args &...args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

template <typename... Args>
[[noreturn]] void Fail(ErrorKind kind, const Args &...args) {
  throw Error(kind, Concat(args...));
}

/// Deterministic random source. Everything drawn here is defined in terms of
/// the raw mt19937_64 stream, so results do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  /// Uniform in [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Uniform integer in [0, n). n must be > 0.
  uint64_t UniformInt(uint64_t n);
  /// Uniform integer in [lo, hi] (inclusive).
  int64_t UniformRange(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(UniformInt(static_cast<uint64_t>(hi - lo + 1)));
  }
  /// Standard normal (Box-Muller; the second variate is cached).
  double Gaussian();

  template <typename T>
  void Shuffle(std::vector<T> *v) {
    for (size_t i = v->size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(i));
      std::swap((*v)[i - 1], (*v)[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

/// 64-bit FNV-1a.
uint64_t Fnv1a(std::string_view data, uint64_t basis = 0xcbf29ce484222325ULL);
uint64_t HashFile(const std::filesystem::path &path);
std::string HexDigest(uint64_t h);

/// Seed for a named sub-task, derived from a master seed.
uint64_t DeriveSeed(uint64_t master, std::string_view name);

std::vector<std::string> SplitString(std::string_view s, char delim,
                                     bool skip_empty = true);
std::string Trim(std::string_view s);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);

double ParseDouble(std::string_view s, std::string_view what);
int64_t ParseInt(std::string_view s, std::string_view what);
std::vector<double> ParseDoubleList(std::string_view s, std::string_view what);
std::vector<int> ParseIntList(std::string_view s, std::string_view what);

/// Shortest round-trip decimal representation of a double.
std::string FormatDouble(double v);
/// Fixed-point with the given number of decimals; -0 is printed as 0.
std::string FormatFixed(double v, int decimals);

std::string ReadTextFile(const std::filesystem::path &path);
/// Writes via a temporary sibling and rename, so readers never see a partial
/// file.
void WriteTextFileAtomic(const std::filesystem::path &path,
                         std::string_view contents);

}  // namespace sstk

#endif  // SSTK_COMMON_H_
