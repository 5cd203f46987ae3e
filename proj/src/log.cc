// log.cc

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

#include "sstk/log.h"

#include <atomic>
#include <iostream>

namespace sstk {

namespace {
std::atomic<int> g_level{static_cast<int>(LogLevel::kWarning)};
std::atomic<long> g_warnings{0};

const char *LevelName(LogLevel level) {
  switch (level) {
    case LogLevel::kError: return "ERROR";
    case LogLevel::kWarning: return "WARNING";
    case LogLevel::kInfo: return "LOG";
    case LogLevel::kDebug: return "VLOG";
  }
  return "?";
}
}  // namespace

void SetLogLevel(LogLevel level) { g_level = static_cast<int>(level); }
LogLevel GetLogLevel() { return static_cast<LogLevel>(g_level.load()); }
long WarningCount() { return g_warnings.load(); }

LogMessage::LogMessage(LogLevel level, const char *func) : level_(level) {
  os_ << LevelName(level) << " (" << func << ") ";
}

LogMessage::~LogMessage() {
  if (level_ == LogLevel::kWarning) ++g_warnings;
  if (static_cast<int>(level_) <= g_level.load()) std::cerr << os_.str() << '\n';
}

}  // namespace sstk
