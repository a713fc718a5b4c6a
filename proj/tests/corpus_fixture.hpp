// tests/corpus_fixture.hpp

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

#ifndef UNITPROSODY_TESTS_CORPUS_FIXTURE_HPP_
#define UNITPROSODY_TESTS_CORPUS_FIXTURE_HPP_

// A small on-disk corpus: gliding harmonic "utterances" with pauses, a
// JSON-lines manifest, and a pipeline config sized for quick runs.

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>

#include "unitprosody/config.hpp"
#include "unitprosody/manifest.hpp"
#include "unitprosody/random.hpp"
#include "unitprosody/waveform.hpp"

namespace unitprosody::testing {

/// Harmonic tone gliding from f_start to f_end with a 150 ms pause in the
/// middle and a little noise, so units, voicing and pitch all vary.
inline Waveform glide_utterance(double f_start, double f_end, double seconds, std::uint64_t seed,
                                int fs = 16000) {
  Rng rng(seed);
  Waveform w;
  w.sample_rate = fs;
  const auto n = static_cast<std::size_t>(seconds * fs);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double f = f_start + (f_end - f_start) * t / seconds;
    phase += 2.0 * std::numbers::pi * f / fs;
    const bool pause = std::abs(t - seconds / 2) < 0.075;
    double x = 0.0;
    if (!pause)
      for (int h = 1; h <= 6; ++h) x += std::sin(h * phase) * (0.25 / h) * (1.0 + 0.5 * std::sin(3.0 * t * h));
    w.samples.push_back(x + 0.002 * rng.normal());
  }
  return w;
}

inline PipelineConfig small_config() {
  PipelineConfig c;
  c.codebook_size = 6;
  c.kmeans_iters = 20;
  c.unit_dim = 6;
  c.channels = 8;
  c.epochs = 4;
  c.batch_size = 2;
  c.bins = 16;
  return c;
}

/// Writes n utterances (speakers s0/s1, labels calm/lively) and returns the
/// manifest path.
inline std::filesystem::path write_corpus(const std::filesystem::path &dir, std::size_t n) {
  Manifest m;
  for (std::size_t i = 0; i < n; ++i) {
    const bool lively = i % 2 == 1;
    const double base = i % 3 == 0 ? 110.0 : 180.0;
    const auto name = "utt" + std::to_string(i);
    write_wav(dir / "audio" / (name + ".wav"),
              glide_utterance(base, base * (lively ? 1.5 : 0.9), 0.8, i + 1));
    ManifestRecord r;
    r.utterance_id = name;
    r.audio_path = "audio/" + name + ".wav";
    r.speaker_id = i % 3 == 0 ? "s0" : "s1";
    r.transcript = "utterance number " + std::to_string(i);
    r.emotion_label = lively ? "lively" : "calm";
    m.records.push_back(r);
  }
  const auto path = dir / "manifest.jsonl";
  io::write_file_atomic(path, format_manifest(m));
  return path;
}

}  // namespace unitprosody::testing

#endif  // UNITPROSODY_TESTS_CORPUS_FIXTURE_HPP_
