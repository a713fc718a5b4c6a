// unitprosody/error.hpp

// Copyright 2026 The unitprosody Authors.

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

#ifndef UNITPROSODY_ERROR_HPP_
#define UNITPROSODY_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace unitprosody {

enum class Errc {
  invalid_argument,
  insufficient_data,
  dimension_mismatch,
  invalid_duration,
  no_voiced_speech,
  unknown_speaker,
  diverged,
  degenerate,
  unaligned,
  parse,
  io,
  config,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::insufficient_data: return "insufficient_data";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::invalid_duration: return "invalid_duration";
    case Errc::no_voiced_speech: return "no_voiced_speech";
    case Errc::unknown_speaker: return "unknown_speaker";
    case Errc::diverged: return "diverged";
    case Errc::degenerate: return "degenerate";
    case Errc::unaligned: return "unaligned";
    case Errc::parse: return "parse";
    case Errc::io: return "io";
    case Errc::config: return "config";
  }
  return "unknown";
}

/// Every failure in the library is reported with this exception. The code
/// lets callers (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string &what) {
  throw Error(code, what);
}

inline void require(bool cond, Errc code, const std::string &what) {
  if (!cond) fail(code, what);
}

}  // namespace unitprosody

#endif  // UNITPROSODY_ERROR_HPP_
