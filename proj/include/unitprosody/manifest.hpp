// unitprosody/manifest.hpp

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

#ifndef UNITPROSODY_MANIFEST_HPP_
#define UNITPROSODY_MANIFEST_HPP_

// Corpus manifests: one JSON object per line,
//   {"utterance_id": "u1", "audio_path": "u1.wav", "speaker_id": "s1",
//    "transcript": "...", "emotion_label": "happy"}
// Relative audio paths resolve against the manifest's directory. Blank
// lines are skipped.

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"

namespace unitprosody {

struct ManifestRecord {
  std::string utterance_id;
  std::string audio_path;
  std::string speaker_id;
  std::optional<std::string> transcript;
  std::optional<std::string> emotion_label;

  bool operator==(const ManifestRecord &) const = default;
};

struct Manifest {
  std::vector<ManifestRecord> records;
  std::filesystem::path base_dir;

  std::size_t size() const { return records.size(); }

  std::filesystem::path resolve(const ManifestRecord &r) const {
    std::filesystem::path p(r.audio_path);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }
};

namespace detail {

inline std::string manifest_string(const nlohmann::json &obj, const char *field, std::size_t line,
                                   bool required) {
  const std::string where = " on manifest line " + std::to_string(line);
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    if (required) fail(Errc::parse, std::string("missing field \"") + field + "\"" + where);
    return {};
  }
  if (!it->is_string()) fail(Errc::parse, std::string("field \"") + field + "\" is not a string" + where);
  auto s = it->get<std::string>();
  if (required && s.empty()) fail(Errc::parse, std::string("field \"") + field + "\" is empty" + where);
  return s;
}

}  // namespace detail

inline Manifest parse_manifest_text(const std::string &text, std::filesystem::path base_dir = {}) {
  Manifest m;
  m.base_dir = std::move(base_dir);
  std::set<std::string> seen;
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::parse_error &e) {
      fail(Errc::parse, "malformed JSON on manifest line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!obj.is_object()) fail(Errc::parse, "manifest line " + std::to_string(lineno) + " is not an object");
    ManifestRecord r;
    r.utterance_id = detail::manifest_string(obj, "utterance_id", lineno, true);
    r.audio_path = detail::manifest_string(obj, "audio_path", lineno, true);
    r.speaker_id = detail::manifest_string(obj, "speaker_id", lineno, true);
    if (obj.contains("transcript") && !obj["transcript"].is_null())
      r.transcript = detail::manifest_string(obj, "transcript", lineno, false);
    if (obj.contains("emotion_label") && !obj["emotion_label"].is_null())
      r.emotion_label = detail::manifest_string(obj, "emotion_label", lineno, false);
    if (r.utterance_id.find_first_of("/\\") != std::string::npos || r.utterance_id == "." ||
        r.utterance_id == "..")
      fail(Errc::parse, "utterance_id '" + r.utterance_id + "' on manifest line " +
                            std::to_string(lineno) + " is not a valid file stem");
    if (!seen.insert(r.utterance_id).second)
      fail(Errc::parse, "duplicate utterance_id '" + r.utterance_id + "' on manifest line " +
                            std::to_string(lineno));
    m.records.push_back(std::move(r));
  }
  return m;
}

inline Manifest parse_manifest(const std::filesystem::path &path) {
  return parse_manifest_text(io::read_file(path), path.parent_path());
}

inline std::string format_manifest(const Manifest &m) {
  std::string out;
  for (const auto &r : m.records) {
    nlohmann::ordered_json obj;
    obj["utterance_id"] = r.utterance_id;
    obj["audio_path"] = r.audio_path;
    obj["speaker_id"] = r.speaker_id;
    if (r.transcript) obj["transcript"] = *r.transcript;
    if (r.emotion_label) obj["emotion_label"] = *r.emotion_label;
    out += obj.dump() + "\n";
  }
  return out;
}

}  // namespace unitprosody

#endif  // UNITPROSODY_MANIFEST_HPP_
