// sstk/log.h

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

#ifndef SSTK_LOG_H_
#define SSTK_LOG_H_

#include <sstream>

namespace sstk {

enum class LogLevel : int { kError = 0, kWarning = 1, kInfo = 2, kDebug = 3 };

/// Messages above this level are dropped. Default kWarning.
void SetLogLevel(LogLevel level);
LogLevel GetLogLevel();

/// Returns the number of warnings emitted so far (including suppressed ones).
long WarningCount();

class LogMessage {
 public:
  LogMessage(LogLevel level, const char *func);
  ~LogMessage();
  std::ostream &stream() { return os_; }

 private:
  LogLevel level_;
  std::ostringstream os_;
};

}  // namespace sstk

#define SSTK_LOG ::sstk::LogMessage(::sstk::LogLevel::kInfo, __func__).stream()
#define SSTK_WARN \
  ::sstk::LogMessage(::sstk::LogLevel::kWarning, __func__).stream()
#define SSTK_VLOG \
  ::sstk::LogMessage(::sstk::LogLevel::kDebug, __func__).stream()

#endif  // SSTK_LOG_H_
