// unitprosody/acoustic_features.hpp

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

#ifndef UNITPROSODY_ACOUSTIC_FEATURES_HPP_
#define UNITPROSODY_ACOUSTIC_FEATURES_HPP_

// Six utterance-level descriptors modelled on their eGeMAPS namesakes,
// reimplemented from their definitions (no bit parity with openSMILE):
//
//   0 slopeUV_500_1500_mean        spectral slope 500-1500 Hz, unvoiced frames
//   1 slopeV_0_500_mean            spectral slope 0-500 Hz, voiced frames
//   2 f0_semitone_risingslope_std  std of rising F0 slopes (semitones/s)
//   3 f1_bandwidth_mean            LPC F1 bandwidth (Hz), voiced frames
//   4 h1_h2_mean                   H1 - H2 (dB), voiced frames
//   5 mfcc4_voiced_stdnorm         std / |mean| of MFCC 4, voiced frames
//
// Frame-level values are smoothed with a 3-frame moving average restricted
// to frames of the same class, and silent frames are skipped. A functional
// over an empty frame set is 0.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "unitprosody/dsp.hpp"
#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"
#include "unitprosody/pitch.hpp"
#include "unitprosody/waveform.hpp"

namespace unitprosody {

inline constexpr std::size_t kNumAcousticFeatures = 6;
using FeatureVector = std::array<double, kNumAcousticFeatures>;

inline const std::array<std::string, kNumAcousticFeatures> &feature_names() {
  static const std::array<std::string, kNumAcousticFeatures> names{
      "slopeUV_500_1500_mean", "slopeV_0_500_mean", "f0_semitone_risingslope_std",
      "f1_bandwidth_mean",     "h1_h2_mean",        "mfcc4_voiced_stdnorm"};
  return names;
}

struct FeatureConfig {
  double window = 0.040;        // analysis window, seconds
  double silence_rms = 1e-4;    // frames below this RMS are skipped
  std::size_t lpc_order = 12;
  double preemphasis = 0.97;
};

namespace detail {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double band_slope(std::span<const double> mag, double bin_hz, double lo, double hi) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    const double f = k * bin_hz;
    if (f < lo || f > hi) continue;
    x.push_back(f);
    y.push_back(20.0 * std::log10(std::max(mag[k], 1e-10)));
  }
  return dsp::ls_slope(x, y);
}

inline double harmonic_peak(std::span<const double> mag, double bin_hz, double f) {
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(0.9 * f / bin_hz)));
  const auto hi = std::min(mag.size() - 1, static_cast<std::size_t>(std::ceil(1.1 * f / bin_hz)));
  double best = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) best = std::max(best, mag[k]);
  return best;
}

inline double f1_bandwidth(std::span<const double> frame, int fs, const FeatureConfig &cfg) {
  std::vector<double> x(frame.size());
  auto win = dsp::hamming(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const double prev = i ? frame[i - 1] : 0.0;
    x[i] = (frame[i] - cfg.preemphasis * prev) * win[i];
  }
  const auto a = dsp::lpc(x, cfg.lpc_order);
  double best_f = std::numeric_limits<double>::infinity(), best_bw = kNaN;
  for (const auto &z : dsp::lpc_roots(a)) {
    if (z.imag() <= 0.0) continue;
    const double f = std::arg(z) * fs / (2.0 * std::numbers::pi);
    const double r = std::abs(z);
    if (r <= 0.0 || r >= 1.0) continue;
    const double bw = -std::log(r) * fs / std::numbers::pi;
    if (f < 50.0 || f > fs / 2.0 - 50.0 || bw > 1000.0) continue;
    if (f < best_f) {
      best_f = f;
      best_bw = bw;
    }
  }
  return best_bw;
}

// 3-point moving average over neighbours that share the mask and are finite.
inline std::vector<double> smooth3(const std::vector<double> &v, const std::vector<bool> &mask) {
  std::vector<double> out(v.size(), kNaN);
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (!mask[t] || !std::isfinite(v[t])) continue;
    double s = 0.0;
    int n = 0;
    for (long d = -1; d <= 1; ++d) {
      const long j = static_cast<long>(t) + d;
      if (j < 0 || j >= static_cast<long>(v.size())) continue;
      const auto u = static_cast<std::size_t>(j);
      if (mask[u] && std::isfinite(v[u])) {
        s += v[u];
        ++n;
      }
    }
    out[t] = s / n;
  }
  return out;
}

inline std::vector<double> finite_values(const std::vector<double> &v) {
  std::vector<double> out;
  for (double x : v)
    if (std::isfinite(x)) out.push_back(x);
  return out;
}

inline double mean_or_zero(const std::vector<double> &v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double std_or_zero(const std::vector<double> &v) {
  if (v.empty()) return 0.0;
  const double m = mean_or_zero(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

// Slopes (units per second) of every rise from a local minimum to the next
// local maximum within contiguous runs of finite values.
inline std::vector<double> rising_slopes(const std::vector<double> &v, double frame_period) {
  std::vector<double> slopes;
  std::size_t t = 0;
  while (t < v.size()) {
    if (!std::isfinite(v[t])) {
      ++t;
      continue;
    }
    std::size_t end = t;
    while (end < v.size() && std::isfinite(v[end])) ++end;
    std::size_t i = t;
    while (i + 1 < end) {
      if (v[i + 1] > v[i]) {
        std::size_t j = i;
        while (j + 1 < end && v[j + 1] > v[j]) ++j;
        slopes.push_back((v[j] - v[i]) / (static_cast<double>(j - i) * frame_period));
        i = j;
      } else {
        ++i;
      }
    }
    t = end;
  }
  return slopes;
}

}  // namespace detail

inline FeatureVector extract_features(const Waveform &wave, const PitchTrack &track,
                                      const FeatureConfig &cfg = {}) {
  const int fs = wave.sample_rate;
  const auto hop = static_cast<std::size_t>(std::lround(track.frame_period * fs));
  require(hop >= 1, Errc::invalid_argument, "track frame period shorter than one sample");
  if (track.size() != wave.samples.size() / hop || track.voiced.size() != track.size())
    fail(Errc::unaligned, "unaligned streams: track has " + std::to_string(track.size()) +
                              " frames, waveform implies " + std::to_string(wave.samples.size() / hop));
  const std::size_t T = track.size();
  const auto win_len = static_cast<std::size_t>(std::lround(cfg.window * fs));
  const std::size_t nfft = dsp::next_pow2(win_len);
  const double bin_hz = static_cast<double>(fs) / static_cast<double>(nfft);
  const auto hann = dsp::hann(win_len);
  const dsp::MfccComputer mfcc(fs, win_len);

  std::vector<double> slope_uv(T, detail::kNaN), slope_v(T, detail::kNaN), semitone(T, detail::kNaN),
      f1bw(T, detail::kNaN), h1h2(T, detail::kNaN), c4(T, detail::kNaN);
  std::vector<bool> voiced(T), unvoiced(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto frame = dsp::centered_frame(wave.samples, static_cast<long>(t * hop + hop / 2), win_len);
    double ss = 0.0;
    for (double s : frame) ss += s * s;
    if (std::sqrt(ss / static_cast<double>(win_len)) < cfg.silence_rms) continue;
    voiced[t] = track.voiced[t];
    unvoiced[t] = !track.voiced[t];

    std::vector<double> windowed(win_len);
    for (std::size_t i = 0; i < win_len; ++i) windowed[i] = frame[i] * hann[i];
    const auto mag = dsp::magnitude_spectrum(windowed, nfft);
    if (unvoiced[t]) {
      slope_uv[t] = detail::band_slope(mag, bin_hz, 500.0, 1500.0);
      continue;
    }
    const double f0 = track.f0_hz[t];
    slope_v[t] = detail::band_slope(mag, bin_hz, 0.0, 500.0);
    semitone[t] = 12.0 * std::log2(f0 / 27.5);
    f1bw[t] = detail::f1_bandwidth(frame, fs, cfg);
    const double h1 = detail::harmonic_peak(mag, bin_hz, f0);
    const double h2 = detail::harmonic_peak(mag, bin_hz, 2.0 * f0);
    h1h2[t] = 20.0 * std::log10(std::max(h1, 1e-10) / std::max(h2, 1e-10));
    c4[t] = mfcc(frame)[4];
  }

  using detail::finite_values;
  FeatureVector out{};
  out[0] = detail::mean_or_zero(finite_values(detail::smooth3(slope_uv, unvoiced)));
  out[1] = detail::mean_or_zero(finite_values(detail::smooth3(slope_v, voiced)));
  out[2] = detail::std_or_zero(detail::rising_slopes(detail::smooth3(semitone, voiced), track.frame_period));
  out[3] = detail::mean_or_zero(finite_values(detail::smooth3(f1bw, voiced)));
  out[4] = detail::mean_or_zero(finite_values(detail::smooth3(h1h2, voiced)));
  const auto c4v = finite_values(detail::smooth3(c4, voiced));
  const double c4_mean = detail::mean_or_zero(c4v);
  out[5] = std::abs(c4_mean) > 1e-12 ? detail::std_or_zero(c4v) / std::abs(c4_mean) : 0.0;
  return out;
}

/// Per-feature sample standard deviation over a pool, floored at 1e-8.
inline FeatureVector pool_scale(std::span<const FeatureVector> pool) {
  FeatureVector scale;
  scale.fill(1e-8);
  if (pool.size() < 2) return scale;
  for (std::size_t i = 0; i < kNumAcousticFeatures; ++i) {
    double m = 0.0;
    for (const auto &v : pool) m += v[i];
    m /= static_cast<double>(pool.size());
    double s = 0.0;
    for (const auto &v : pool) s += (v[i] - m) * (v[i] - m);
    scale[i] = std::max(std::sqrt(s / static_cast<double>(pool.size() - 1)), 1e-8);
  }
  return scale;
}

inline double standardized_euclidean(const FeatureVector &a, const FeatureVector &b,
                                     const FeatureVector &scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < kNumAcousticFeatures; ++i) {
    const double d = (a[i] - b[i]) / std::max(scale[i], 1e-8);
    s += d * d;
  }
  return std::sqrt(s);
}

// CSV: "utterance_id" followed by the six feature names.
inline std::string format_feature_csv(std::span<const std::pair<std::string, FeatureVector>> rows) {
  std::string out = "utterance_id";
  for (const auto &n : feature_names()) out += ',' + n;
  out += '\n';
  char buf[64];
  for (const auto &[id, v] : rows) {
    out += id;
    for (double x : v) {
      std::snprintf(buf, sizeof buf, ",%.6f", x);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline std::vector<std::pair<std::string, FeatureVector>> parse_feature_csv(const std::string &text) {
  auto lines = io::split_lines(text);
  std::string header = "utterance_id";
  for (const auto &n : feature_names()) header += ',' + n;
  require(!lines.empty() && lines[0] == header, Errc::parse, "feature csv: bad header");
  std::vector<std::pair<std::string, FeatureVector>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (;;) {
      auto c = lines[i].find(',', pos);
      f.push_back(lines[i].substr(pos, c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    require(f.size() == 1 + kNumAcousticFeatures, Errc::parse,
            "feature csv: line " + std::to_string(i + 1) + " needs 7 fields");
    FeatureVector v;
    for (std::size_t k = 0; k < kNumAcousticFeatures; ++k) v[k] = io::parse_real(f[k + 1], "feature csv");
    rows.emplace_back(f[0], v);
  }
  return rows;
}

}  // namespace unitprosody

#endif  // UNITPROSODY_ACOUSTIC_FEATURES_HPP_
