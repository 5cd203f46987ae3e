// common.cc

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

#include "sstk/common.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

namespace sstk {

uint64_t Rng::UniformInt(uint64_t n) {
  if (n == 0) Fail(ErrorKind::kInternal, "Rng::UniformInt called with n = 0");
  // Rejection sampling removes modulo bias.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  double u1;
  do {
    u1 = Uniform();
  } while (u1 <= 0.0);
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_ = r * std::sin(theta);
  have_cached_ = true;
  return r * std::cos(theta);
}

uint64_t Fnv1a(std::string_view data, uint64_t basis) {
  uint64_t h = basis;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t HashFile(const std::filesystem::path &path) {
  return Fnv1a(ReadTextFile(path));
}

std::string HexDigest(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

uint64_t DeriveSeed(uint64_t master, std::string_view name) {
  std::string key = std::to_string(master);
  key.push_back(':');
  key.append(name);
  return Fnv1a(key);
}

std::vector<std::string> SplitString(std::string_view s, char delim,
                                     bool skip_empty) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find(delim, start);
    if (end == std::string_view::npos) end = s.size();
    if (!(skip_empty && end == start))
      out.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::string Trim(std::string_view s) {
  const char *ws = " \t\r\n";
  size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string Join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

double ParseDouble(std::string_view s, std::string_view what) {
  std::string t = Trim(s);
  if (t == "inf") return INFINITY;
  if (t == "-inf") return -INFINITY;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    Fail(ErrorKind::kData, "cannot parse '", t, "' as a number for ", what);
  return v;
}

int64_t ParseInt(std::string_view s, std::string_view what) {
  std::string t = Trim(s);
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    Fail(ErrorKind::kData, "cannot parse '", t, "' as an integer for ", what);
  return v;
}

std::vector<double> ParseDoubleList(std::string_view s, std::string_view what) {
  std::vector<double> out;
  std::string t(s);
  for (char &c : t)
    if (c == ',') c = ' ';
  for (const auto &tok : SplitString(t, ' ')) out.push_back(ParseDouble(tok, what));
  return out;
}

std::vector<int> ParseIntList(std::string_view s, std::string_view what) {
  std::vector<int> out;
  std::string t(s);
  for (char &c : t)
    if (c == ',') c = ' ';
  for (const auto &tok : SplitString(t, ' '))
    out.push_back(static_cast<int>(ParseInt(tok, what)));
  return out;
}

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string FormatFixed(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string out(buf);
  // Avoid "-0.0" for values that round to zero.
  if (out[0] == '-' && out.find_first_not_of("-0.") == std::string::npos)
    out.erase(0, 1);
  return out;
}

std::string ReadTextFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kData, "cannot open ", path.string(), " for reading");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void WriteTextFileAtomic(const std::filesystem::path &path,
                         std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorKind::kData, "cannot open ", tmp.string(), " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) Fail(ErrorKind::kData, "write failed for ", tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) Fail(ErrorKind::kData, "cannot rename ", tmp.string(), " to ", path.string());
}

}  // namespace sstk
