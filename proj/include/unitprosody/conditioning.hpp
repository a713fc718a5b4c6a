// unitprosody/conditioning.hpp

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

#ifndef UNITPROSODY_CONDITIONING_HPP_
#define UNITPROSODY_CONDITIONING_HPP_

// Vocoder conditioning: F0 resampling to the unit rate, the per-frame
// conditioning matrix, and a deterministic harmonic-plus-noise synthesizer
// standing in for a neural vocoder.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"
#include "unitprosody/pitch.hpp"
#include "unitprosody/predictors.hpp"
#include "unitprosody/random.hpp"
#include "unitprosody/unit_codec.hpp"
#include "unitprosody/waveform.hpp"

namespace unitprosody {

/// Resamples a track to `target_rate` frames per second with
/// corner-aligned linear interpolation: output j sits at source position
/// j*(n-1)/(m-1), so the first and last values are preserved. Between a
/// voiced and an unvoiced frame the nearer frame's value is held, which
/// keeps unvoiced runs at 0 instead of ramping across them.
inline std::vector<double> interpolate_f0(const PitchTrack &track, double target_rate) {
  require(track.size() > 0, Errc::invalid_argument, "cannot interpolate an empty track");
  require(target_rate > 0 && std::isfinite(target_rate), Errc::invalid_argument,
          "target rate must be positive");
  const std::size_t n = track.size();
  const double duration = static_cast<double>(n) * track.frame_period;
  const auto m = static_cast<std::size_t>(std::max(1L, std::lround(duration * target_rate)));
  std::vector<double> out(m);
  if (n == 1 || m == 1) {
    std::fill(out.begin(), out.end(), track.f0_hz[0]);
    return out;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double pos = static_cast<double>(j * (n - 1)) / static_cast<double>(m - 1);
    const auto i0 = std::min(static_cast<std::size_t>(pos), n - 1);
    const double frac = pos - static_cast<double>(i0);
    if (frac == 0.0 || i0 + 1 >= n) {
      out[j] = track.f0_hz[i0];
    } else if (track.voiced[i0] && track.voiced[i0 + 1]) {
      out[j] = track.f0_hz[i0] + frac * (track.f0_hz[i0 + 1] - track.f0_hz[i0]);
    } else {
      out[j] = track.f0_hz[frac < 0.5 ? i0 : i0 + 1];
    }
  }
  return out;
}

struct UnitEmbeddingTable {
  std::vector<double> values;  // row-major K x dim
  std::size_t dim = 0;

  std::size_t size() const { return dim ? values.size() / dim : 0; }
  std::span<const double> row(Unit u) const {
    return {values.data() + static_cast<std::size_t>(u) * dim, dim};
  }

  static UnitEmbeddingTable from_model(const PredictorModel &m) {
    const auto &a = m.arch();
    auto p = m.params();
    return {std::vector<double>(p.begin(), p.begin() + static_cast<long>(a.num_units * a.unit_dim)),
            a.unit_dim};
  }
};

/// Row t = [unit embedding (E) | f0 (1) | emotion (96) | speaker (S)].
struct ConditioningMatrix {
  std::size_t rows = 0;
  std::size_t unit_dim = 0;
  std::size_t speaker_dim = 0;
  double frame_period = 0.020;
  std::vector<float> values;

  std::size_t cols() const { return unit_dim + 1 + kEmotionDim + speaker_dim; }
  std::size_t f0_col() const { return unit_dim; }
  std::size_t emotion_col() const { return unit_dim + 1; }
  std::size_t speaker_col() const { return unit_dim + 1 + kEmotionDim; }
  float at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
  std::span<const float> row(std::size_t r) const { return {values.data() + r * cols(), cols()}; }

  bool operator==(const ConditioningMatrix &) const = default;
};

inline ConditioningMatrix assemble_conditioning(const UnitSequence &units,
                                                const UnitEmbeddingTable &unit_emb,
                                                std::span<const double> f0,
                                                const EmotionEmbedding &emo,
                                                std::span<const double> speaker) {
  if (units.units.size() != f0.size())
    fail(Errc::unaligned, "unaligned streams: " + std::to_string(units.units.size()) +
                              " units vs " + std::to_string(f0.size()) + " f0 frames");
  require(emo.values.size() == kEmotionDim, Errc::dimension_mismatch,
          "emotion embedding must have 96 values");
  require(unit_emb.dim >= 1, Errc::invalid_argument, "empty unit embedding table");
  ConditioningMatrix m;
  m.rows = units.units.size();
  m.unit_dim = unit_emb.dim;
  m.speaker_dim = speaker.size();
  m.frame_period = units.frame_period;
  m.values.reserve(m.rows * m.cols());
  for (std::size_t t = 0; t < m.rows; ++t) {
    const Unit u = units.units[t];
    require(u >= 0 && static_cast<std::size_t>(u) < unit_emb.size(), Errc::invalid_argument,
            "unit " + std::to_string(u) + " has no embedding");
    require(f0[t] >= 0.0 && std::isfinite(f0[t]), Errc::invalid_argument, "f0 must be finite and >= 0");
    for (double v : unit_emb.row(u)) m.values.push_back(static_cast<float>(v));
    m.values.push_back(static_cast<float>(f0[t]));
    for (double v : emo.values) m.values.push_back(static_cast<float>(v));
    for (double v : speaker) m.values.push_back(static_cast<float>(v));
  }
  return m;
}

// ---------------------------------------------------------------------------

struct SynthConfig {
  std::size_t harmonics = 8;
  double voiced_gain = 0.3;
  double noise_level = 0.003;  // about -50 dBFS
  std::uint64_t noise_seed = 0x6e6f697365ull;
  std::uint64_t timbre_seed = 0x74696d6272ull;
};

/// Harmonic amplitudes from a fixed affine map of a unit embedding,
/// rectified and normalized to unit energy.
inline std::vector<double> harmonic_amplitudes(std::span<const float> unit_embedding,
                                               const SynthConfig &cfg = {}) {
  Rng rng(cfg.timbre_seed);
  const std::size_t e = unit_embedding.size();
  const double scale = 0.5 / std::sqrt(static_cast<double>(std::max<std::size_t>(e, 1)));
  std::vector<double> amp(cfg.harmonics);
  double energy = 0.0;
  for (std::size_t h = 0; h < cfg.harmonics; ++h) {
    double s = 1.0 / static_cast<double>(h + 1);
    for (std::size_t i = 0; i < e; ++i) s += rng.normal(0.0, scale) * unit_embedding[i];
    amp[h] = std::abs(s);
    energy += amp[h] * amp[h];
  }
  if (energy <= 0.0) {
    amp.assign(cfg.harmonics, 0.0);
    amp[0] = 1.0;
    return amp;
  }
  for (auto &a : amp) a /= std::sqrt(energy);
  return amp;
}

/// Renders `hop = frame_period * sample_rate` samples per frame. Frame
/// parameters (f0, voicing, harmonic amplitudes) are spread over the
/// signal with 50%-overlapped Hann windows; the harmonic stack runs off a
/// single phase accumulator, so voiced output has no phase jumps.
inline Waveform toy_synthesize(const ConditioningMatrix &cond, int sample_rate,
                               const SynthConfig &cfg = {}) {
  require(sample_rate > 0, Errc::invalid_argument, "sample rate must be positive");
  require(cond.values.size() == cond.rows * cond.cols(), Errc::dimension_mismatch,
          "conditioning matrix buffer has the wrong size");
  const double hop_real = cond.frame_period * sample_rate;
  const auto hop = static_cast<std::size_t>(std::lround(hop_real));
  require(hop >= 1 && std::abs(hop_real - static_cast<double>(hop)) < 1e-6, Errc::invalid_argument,
          "frame period must be a whole number of samples");
  const double nyquist = sample_rate / 2.0;
  const std::size_t T = cond.rows, H = cfg.harmonics;

  std::vector<double> f0(T);
  std::vector<std::vector<double>> amps(T);
  for (std::size_t t = 0; t < T; ++t) {
    f0[t] = cond.at(t, cond.f0_col());
    require(f0[t] >= 0.0 && f0[t] < nyquist, Errc::invalid_argument,
            "f0 " + std::to_string(f0[t]) + " Hz is not below Nyquist");
    amps[t] = harmonic_amplitudes(cond.row(t).subspan(0, cond.unit_dim), cfg);
  }

  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.assign(T * hop, 0.0);
  Rng noise(cfg.noise_seed);
  std::vector<double> amp(H);
  double phase = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t n = 0; n < out.samples.size(); ++n) {
    // Frames whose Hann window (length 2*hop, centred mid-frame) covers n.
    const double pos = (static_cast<double>(n) + 0.5) / static_cast<double>(hop) - 0.5;
    const long t0 = static_cast<long>(std::floor(pos));
    double wsum = 0.0, vsum = 0.0, fsum = 0.0;
    std::fill(amp.begin(), amp.end(), 0.0);
    for (long t = t0; t <= t0 + 1; ++t) {
      if (t < 0 || t >= static_cast<long>(T)) continue;
      const double d = pos - static_cast<double>(t);  // in (-1, 1)
      const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * d);
      const auto ut = static_cast<std::size_t>(t);
      wsum += w;
      if (f0[ut] > 0.0) {
        vsum += w;
        fsum += w * f0[ut];
        for (std::size_t h = 0; h < H; ++h) amp[h] += w * amps[ut][h];
      }
    }
    const double voicing = wsum > 0.0 ? vsum / wsum : 0.0;
    double s = 0.0;
    if (vsum > 0.0) {
      const double f = fsum / vsum;
      for (std::size_t h = 0; h < H; ++h) {
        if ((h + 1) * f >= nyquist) break;
        s += (amp[h] / vsum) * std::sin(static_cast<double>(h + 1) * phase);
      }
      phase = std::fmod(phase + two_pi * f / sample_rate, two_pi);
    }
    out.samples[n] = cfg.voiced_gain * voicing * s + cfg.noise_level * (1.0 - voicing) * noise.normal();
  }
  return out;
}

// ---------------------------------------------------------------------------
// "CND1 T E S frame_period" header line, then row-major float32 values.

inline std::string encode_conditioning(const ConditioningMatrix &m) {
  std::string out = "CND1 " + std::to_string(m.rows) + ' ' + std::to_string(m.unit_dim) + ' ' +
                    std::to_string(m.speaker_dim) + ' ' + io::format_real(m.frame_period) + '\n';
  out.reserve(out.size() + 4 * m.values.size());
  for (float v : m.values) io::put_f32(out, v);
  return out;
}

inline ConditioningMatrix decode_conditioning(const std::string &bytes) {
  io::ByteReader r(bytes, "conditioning file");
  auto toks = io::split_ws(r.line());
  require(toks.size() == 5 && toks[0] == "CND1", Errc::parse, "conditioning file: bad header");
  ConditioningMatrix m;
  m.rows = static_cast<std::size_t>(io::parse_int(toks[1], "conditioning file"));
  m.unit_dim = static_cast<std::size_t>(io::parse_int(toks[2], "conditioning file"));
  m.speaker_dim = static_cast<std::size_t>(io::parse_int(toks[3], "conditioning file"));
  m.frame_period = io::parse_real(toks[4], "conditioning file");
  require(r.remaining() == 4 * m.rows * m.cols(), Errc::parse, "conditioning file: size mismatch");
  m.values.resize(m.rows * m.cols());
  for (auto &v : m.values) v = r.f32();
  return m;
}

}  // namespace unitprosody

#endif  // UNITPROSODY_CONDITIONING_HPP_
