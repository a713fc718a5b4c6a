// unitprosody/io.hpp

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

#ifndef UNITPROSODY_IO_HPP_
#define UNITPROSODY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "unitprosody/error.hpp"

namespace unitprosody::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(Errc::io, "read error on " + path.string());
  return ss.str();
}

/// Writes `contents` to a sibling temporary file and renames it into place,
/// so readers never observe a partially written artifact.
inline void write_file_atomic(const std::filesystem::path &path,
                              const std::string &contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) fail(Errc::io, "cannot create directory " + path.parent_path().string());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io, "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) fail(Errc::io, "write error on " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(Errc::io, "cannot rename into " + path.string());
  }
}

inline std::vector<std::string> split_lines(const std::string &text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::string> split_ws(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline void put_u32(std::string &buf, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  buf.append(b, 4);
}

inline void put_f32(std::string &buf, float v) {
  char b[4];
  std::memcpy(b, &v, 4);
  buf.append(b, 4);
}

// Cursor over a binary blob; every read is bounds-checked.
class ByteReader {
 public:
  ByteReader(const std::string &data, std::string what)
      : data_(data), what_(std::move(what)) {}

  std::uint32_t u32() {
    std::uint32_t v;
    std::memcpy(&v, take(4), 4);
    return v;
  }
  std::uint16_t u16() {
    std::uint16_t v;
    std::memcpy(&v, take(2), 2);
    return v;
  }
  std::int16_t i16() {
    std::int16_t v;
    std::memcpy(&v, take(2), 2);
    return v;
  }
  float f32() {
    float v;
    std::memcpy(&v, take(4), 4);
    return v;
  }
  std::string bytes(std::size_t n) { return std::string(take(n), n); }
  std::string line() {
    auto nl = data_.find('\n', pos_);
    if (nl == std::string::npos) fail(Errc::parse, what_ + ": missing header line");
    std::string s = data_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return s;
  }
  void skip(std::size_t n) { take(n); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  const char *take(std::size_t n) {
    if (data_.size() - pos_ < n) fail(Errc::parse, what_ + ": truncated data");
    const char *p = data_.data() + pos_;
    pos_ += n;
    return p;
  }

  const std::string &data_;
  std::string what_;
  std::size_t pos_ = 0;
};

// 64-bit FNV-1a; stable across platforms, unlike std::hash.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Decimal text that reads back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_real(const std::string &tok, const std::string &what) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    fail(Errc::parse, what + ": not a number: '" + tok + "'");
  }
}

inline long long parse_int(const std::string &tok, const std::string &what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    fail(Errc::parse, what + ": not an integer: '" + tok + "'");
  }
}

}  // namespace unitprosody::io

#endif  // UNITPROSODY_IO_HPP_
