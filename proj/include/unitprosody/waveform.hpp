// unitprosody/waveform.hpp

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

#ifndef UNITPROSODY_WAVEFORM_HPP_
#define UNITPROSODY_WAVEFORM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"

namespace unitprosody {

struct Waveform {
  std::vector<double> samples;  // nominally in [-1, 1]
  int sample_rate = 16000;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// 16-bit PCM mono WAV. Samples are clipped to [-1, 1] before scaling.
inline std::string encode_wav(const Waveform &w) {
  require(w.sample_rate > 0, Errc::invalid_argument, "sample rate must be > 0");
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  auto u16 = [&](std::uint16_t v) { out.append(reinterpret_cast<const char *>(&v), 2); };
  out += "RIFF";
  io::put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  io::put_u32(out, 16);
  u16(1);  // PCM
  u16(1);  // mono
  io::put_u32(out, static_cast<std::uint32_t>(w.sample_rate));
  io::put_u32(out, static_cast<std::uint32_t>(w.sample_rate) * 2);
  u16(2);
  u16(16);
  out += "data";
  io::put_u32(out, data_bytes);
  for (double s : w.samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const auto v = static_cast<std::int16_t>(std::lround(c * 32767.0));
    out.append(reinterpret_cast<const char *>(&v), 2);
  }
  return out;
}

inline Waveform decode_wav(const std::string &bytes) {
  io::ByteReader r(bytes, "wav");
  require(r.bytes(4) == "RIFF", Errc::parse, "wav: missing RIFF tag");
  r.u32();
  require(r.bytes(4) == "WAVE", Errc::parse, "wav: missing WAVE tag");
  Waveform w;
  bool have_fmt = false;
  while (r.remaining() >= 8) {
    const std::string id = r.bytes(4);
    const std::uint32_t size = r.u32();
    if (id == "fmt ") {
      require(size >= 16, Errc::parse, "wav: short fmt chunk");
      const auto format = r.u16();
      const auto channels = r.u16();
      w.sample_rate = static_cast<int>(r.u32());
      r.u32();
      r.u16();
      const auto bits = r.u16();
      r.skip(size - 16);
      require(format == 1 && channels == 1 && bits == 16, Errc::parse,
              "wav: only 16-bit PCM mono is supported");
      have_fmt = true;
    } else if (id == "data") {
      require(have_fmt, Errc::parse, "wav: data chunk before fmt chunk");
      require(size % 2 == 0 && size <= r.remaining(), Errc::parse,
              "wav: bad data chunk size");
      w.samples.resize(size / 2);
      for (auto &s : w.samples) s = r.i16() / 32768.0;
      return w;
    } else {
      r.skip(size + (size & 1));
    }
  }
  fail(Errc::parse, "wav: no data chunk");
}

inline Waveform read_wav(const std::filesystem::path &path) {
  return decode_wav(io::read_file(path));
}

inline void write_wav(const std::filesystem::path &path, const Waveform &w) {
  io::write_file_atomic(path, encode_wav(w));
}

}  // namespace unitprosody

#endif  // UNITPROSODY_WAVEFORM_HPP_
