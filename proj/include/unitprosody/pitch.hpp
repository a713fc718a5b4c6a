// unitprosody/pitch.hpp

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

#ifndef UNITPROSODY_PITCH_HPP_
#define UNITPROSODY_PITCH_HPP_

// F0 tracking, per-speaker normalization and F0 bin quantization.
//
// The tracker follows the YAAPT recipe minus its spectral (SHC) track: each
// frame proposes pitch candidates from peaks of the normalized
// cross-correlation function, and dynamic programming chooses one path
// through candidates plus an "unvoiced" state per frame.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"
#include "unitprosody/waveform.hpp"

namespace unitprosody {

struct PitchTrack {
  std::vector<double> f0_hz;  // 0 on unvoiced frames
  std::vector<bool> voiced;
  double frame_period = 0.010;

  std::size_t size() const { return f0_hz.size(); }
  // Frame i covers [i, i+1) * frame_period; this is its centre.
  double time(std::size_t i) const { return (static_cast<double>(i) + 0.5) * frame_period; }

  static PitchTrack from_f0(std::vector<double> f0, double frame_period) {
    PitchTrack t;
    t.frame_period = frame_period;
    t.voiced.resize(f0.size());
    for (std::size_t i = 0; i < f0.size(); ++i) t.voiced[i] = f0[i] > 0.0;
    t.f0_hz = std::move(f0);
    return t;
  }
};

struct TrackerConfig {
  double f_min = 60.0;
  double f_max = 400.0;
  double frame_period = 0.010;
  // Candidates whose merit falls below this lose to the unvoiced state.
  double voicing_threshold = 0.5;
  double window = 0.035;  // correlation window, seconds
  // Merit = NCCF - lag_penalty * (normalized lag), biasing ties toward the
  // shortest period so exact multiples of the period do not win.
  double lag_penalty = 0.1;
  double candidate_floor = 0.3;
  std::size_t max_candidates = 6;
  double jump_cost = 1.0;      // per octave between consecutive voiced frames
  double voicing_cost = 0.2;   // voiced <-> unvoiced switch
  double energy_floor = 1e-8;  // mean-square below this is treated as silence
  // Zero-phase low-pass applied before correlation; 0 disables. Smooths
  // waveform corners so the NCCF peak stays parabolic at fractional lags.
  // The cutoff is raised to 2 * f_max when lower, and filtering is skipped
  // when that reaches fs/2.
  double lowpass_hz = 1000.0;
};

namespace detail {

struct PitchCandidate {
  double f0;
  double merit;
};

/// Symmetric windowed-sinc (Hamming, 101 taps) low-pass, applied without
/// delay; the signal is zero-extended at both ends.
inline std::vector<double> lowpass(std::span<const double> x, double cutoff_hz, int fs) {
  constexpr int kHalf = 50;
  const double fc = cutoff_hz / fs;
  std::vector<double> h(2 * kHalf + 1);
  double sum = 0.0;
  for (int i = -kHalf; i <= kHalf; ++i) {
    const double sinc = i == 0 ? 2.0 * fc : std::sin(2.0 * std::numbers::pi * fc * i) / (std::numbers::pi * i);
    const double w = 0.54 + 0.46 * std::cos(std::numbers::pi * i / kHalf);
    h[static_cast<std::size_t>(i + kHalf)] = sinc * w;
    sum += sinc * w;
  }
  for (auto &v : h) v /= sum;
  const auto n = static_cast<long>(x.size());
  std::vector<double> y(x.size(), 0.0);
  for (long t = 0; t < n; ++t) {
    double acc = 0.0;
    const long lo = std::max(-static_cast<long>(kHalf), -t), hi = std::min(static_cast<long>(kHalf), n - 1 - t);
    for (long i = lo; i <= hi; ++i) acc += h[static_cast<std::size_t>(i + kHalf)] * x[static_cast<std::size_t>(t + i)];
    y[static_cast<std::size_t>(t)] = acc;
  }
  return y;
}

inline std::vector<PitchCandidate> nccf_candidates(
    std::span<const double> x, long center, int fs, const TrackerConfig &cfg) {
  const auto win = static_cast<std::size_t>(std::lround(cfg.window * fs));
  const long min_lag = std::max(2L, static_cast<long>(std::floor(fs / cfg.f_max)));
  const long max_lag = static_cast<long>(std::ceil(fs / cfg.f_min));
  const long lo = min_lag - 1, hi = max_lag + 1;

  const long start = center - static_cast<long>(win / 2);
  const std::size_t len = win + static_cast<std::size_t>(hi);
  std::vector<double> seg(len, 0.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const long j = start + static_cast<long>(i);
    if (j >= 0 && j < static_cast<long>(x.size())) seg[i] = x[static_cast<std::size_t>(j)];
    mean += seg[i];
  }
  mean /= static_cast<double>(len);
  for (auto &v : seg) v -= mean;

  double e0 = 0.0;
  for (std::size_t n = 0; n < win; ++n) e0 += seg[n] * seg[n];
  if (e0 / static_cast<double>(win) < cfg.energy_floor) return {};

  std::vector<double> nccf(static_cast<std::size_t>(hi - lo + 1), 0.0);
  double ek = 0.0;
  for (std::size_t n = 0; n < win; ++n) ek += seg[n + lo] * seg[n + lo];
  for (long k = lo; k <= hi; ++k) {
    if (k > lo) {
      const double out = seg[static_cast<std::size_t>(k - 1)];
      const double in = seg[static_cast<std::size_t>(k) + win - 1];
      ek += in * in - out * out;
    }
    double num = 0.0;
    for (std::size_t n = 0; n < win; ++n) num += seg[n] * seg[n + static_cast<std::size_t>(k)];
    const double den = std::sqrt(e0 * std::max(ek, 0.0));
    nccf[static_cast<std::size_t>(k - lo)] = den > 1e-12 ? num / den : 0.0;
  }

  std::vector<PitchCandidate> cands;
  for (long k = min_lag; k <= max_lag; ++k) {
    const double a = nccf[static_cast<std::size_t>(k - 1 - lo)];
    const double b = nccf[static_cast<std::size_t>(k - lo)];
    const double c = nccf[static_cast<std::size_t>(k + 1 - lo)];
    if (!(b >= a && b > c) || b < cfg.candidate_floor) continue;
    double delta = 0.0, peak = b;
    const double curv = a - 2.0 * b + c;
    if (curv < 0.0) {
      delta = std::clamp(0.5 * (a - c) / curv, -0.5, 0.5);
      peak = b - 0.25 * (a - c) * delta;
    }
    const double lag = static_cast<double>(k) + delta;
    const double f0 = std::clamp(fs / lag, cfg.f_min, cfg.f_max);
    const double merit = std::min(peak, 1.0) -
                         cfg.lag_penalty * (lag - min_lag) / static_cast<double>(max_lag - min_lag);
    cands.push_back({f0, merit});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const auto &p, const auto &q) { return p.merit > q.merit; });
  if (cands.size() > cfg.max_candidates) cands.resize(cfg.max_candidates);
  return cands;
}

}  // namespace detail

inline PitchTrack track_f0(const Waveform &wave, const TrackerConfig &cfg = {}) {
  const int fs = wave.sample_rate;
  require(fs > 0, Errc::invalid_argument, "sample rate must be positive");
  require(cfg.f_min > 0 && cfg.f_min < cfg.f_max && cfg.f_max < fs / 2.0,
          Errc::invalid_argument, "invalid pitch range");
  require(cfg.frame_period > 0 && cfg.window > 0, Errc::invalid_argument,
          "invalid frame period or window");
  const auto hop = static_cast<long>(std::lround(cfg.frame_period * fs));
  require(hop >= 1, Errc::invalid_argument, "frame period shorter than one sample");
  const std::size_t num_frames = wave.samples.size() / static_cast<std::size_t>(hop);
  require(num_frames >= 2, Errc::invalid_argument,
          "waveform too short: need at least 2 frames");
  for (double s : wave.samples)
    require(std::isfinite(s), Errc::invalid_argument, "non-finite sample");

  require(cfg.lowpass_hz >= 0.0, Errc::invalid_argument, "low-pass cutoff must be >= 0");
  const double cutoff = cfg.lowpass_hz > 0.0 ? std::max(cfg.lowpass_hz, 2.0 * cfg.f_max) : 0.0;
  const auto x = cutoff > 0.0 && cutoff < fs / 2.0 ? detail::lowpass(wave.samples, cutoff, fs) : wave.samples;
  std::vector<std::vector<detail::PitchCandidate>> cands(num_frames);
  for (std::size_t t = 0; t < num_frames; ++t)
    cands[t] = detail::nccf_candidates(x, static_cast<long>(t) * hop + hop / 2, fs, cfg);

  // Viterbi over states {candidates..., unvoiced}; unvoiced is the last index.
  const double unvoiced_cost = 1.0 - cfg.voicing_threshold;
  auto local = [&](std::size_t t, std::size_t s) {
    return s < cands[t].size() ? 1.0 - cands[t][s].merit : unvoiced_cost;
  };
  auto transition = [&](std::size_t t, std::size_t from, std::size_t to) {
    const bool v_from = from < cands[t - 1].size();
    const bool v_to = to < cands[t].size();
    if (v_from && v_to)
      return cfg.jump_cost * std::abs(std::log2(cands[t][to].f0 / cands[t - 1][from].f0));
    return v_from == v_to ? 0.0 : cfg.voicing_cost;
  };

  std::vector<std::vector<double>> cost(num_frames);
  std::vector<std::vector<std::size_t>> back(num_frames);
  cost[0].resize(cands[0].size() + 1);
  for (std::size_t s = 0; s < cost[0].size(); ++s) cost[0][s] = local(0, s);
  for (std::size_t t = 1; t < num_frames; ++t) {
    const std::size_t ns = cands[t].size() + 1;
    cost[t].assign(ns, std::numeric_limits<double>::infinity());
    back[t].assign(ns, 0);
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t p = 0; p < cost[t - 1].size(); ++p) {
        const double c = cost[t - 1][p] + transition(t, p, s);
        if (c < cost[t][s]) {
          cost[t][s] = c;
          back[t][s] = p;
        }
      }
      cost[t][s] += local(t, s);
    }
  }

  PitchTrack track;
  track.frame_period = static_cast<double>(hop) / fs;
  track.f0_hz.assign(num_frames, 0.0);
  track.voiced.assign(num_frames, false);
  const auto &last = cost[num_frames - 1];
  std::size_t s = static_cast<std::size_t>(
      std::min_element(last.begin(), last.end()) - last.begin());
  for (std::size_t t = num_frames; t-- > 0;) {
    if (s < cands[t].size()) {
      track.f0_hz[t] = cands[t][s].f0;
      track.voiced[t] = true;
    }
    if (t > 0) s = back[t][s];
  }
  return track;
}

// ---------------------------------------------------------------------------

struct SpeakerPitchStats {
  std::string speaker_id;
  double mean_hz = 0.0;
  double std_hz = 1.0;
  std::size_t n_voiced = 0;

  static constexpr double kStdFloor = 1e-5;
};

/// Mean and population standard deviation over voiced frames, std floored.
inline SpeakerPitchStats speaker_stats(std::span<const PitchTrack> tracks,
                                       const std::string &speaker_id) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto &t : tracks)
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t.voiced[i]) {
        sum += t.f0_hz[i];
        ++n;
      }
  if (n == 0) fail(Errc::no_voiced_speech, "no voiced speech for speaker " + speaker_id);
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto &t : tracks)
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t.voiced[i]) ss += (t.f0_hz[i] - mean) * (t.f0_hz[i] - mean);
  SpeakerPitchStats st;
  st.speaker_id = speaker_id;
  st.mean_hz = mean;
  st.std_hz = std::max(std::sqrt(ss / static_cast<double>(n)), SpeakerPitchStats::kStdFloor);
  st.n_voiced = n;
  return st;
}

inline void validate(const SpeakerPitchStats &s) {
  require(std::isfinite(s.mean_hz) && std::isfinite(s.std_hz) &&
              s.std_hz >= SpeakerPitchStats::kStdFloor && s.n_voiced >= 1,
          Errc::invalid_argument, "invalid speaker stats for " + s.speaker_id);
}

inline double normalize_value(double f0_hz, const SpeakerPitchStats &s) {
  return (f0_hz - s.mean_hz) / s.std_hz;
}

inline double denormalize_value(double z, const SpeakerPitchStats &s) {
  return z * s.std_hz + s.mean_hz;
}

/// Speaker-normalized F0; unvoiced frames hold no value.
using NormalizedTrack = std::vector<std::optional<double>>;

inline NormalizedTrack normalize_f0(const PitchTrack &t, const SpeakerPitchStats &s) {
  validate(s);
  NormalizedTrack out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.voiced[i]) out[i] = normalize_value(t.f0_hz[i], s);
  return out;
}

inline PitchTrack denormalize_f0(const NormalizedTrack &z, const SpeakerPitchStats &s,
                                 double frame_period) {
  validate(s);
  std::vector<double> f0(z.size(), 0.0);
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i]) f0[i] = denormalize_value(*z[i], s);
  PitchTrack t;
  t.frame_period = frame_period;
  t.voiced.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) t.voiced[i] = z[i].has_value();
  t.f0_hz = std::move(f0);
  return t;
}

// ---------------------------------------------------------------------------

/// d equal-width bins over the normalized range [lo, hi). Intervals are
/// half-open; values outside the range clamp to the extreme bins.
class PitchQuantizer {
 public:
  static constexpr double kVoicingCutoff = 0.1;

  PitchQuantizer(std::size_t d = 32, double lo = -3.0, double hi = 3.0)
      : d_(d), lo_(lo), hi_(hi) {
    require(d >= 2, Errc::invalid_argument, "quantizer needs d >= 2");
    require(lo < hi && std::isfinite(lo) && std::isfinite(hi), Errc::invalid_argument,
            "quantizer needs lo < hi");
    centers_.resize(d);
    for (std::size_t j = 0; j < d; ++j) centers_[j] = lo + (j + 0.5) * (hi - lo) / d;
  }

  std::size_t d() const { return d_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double bin_width() const { return (hi_ - lo_) / static_cast<double>(d_); }
  const std::vector<double> &centers() const { return centers_; }
  double edge(std::size_t j) const { return lo_ + static_cast<double>(j) * (hi_ - lo_) / d_; }

  std::size_t bin_index(double z) const {
    if (!(z >= lo_)) return 0;  // also catches NaN
    if (z >= hi_) return d_ - 1;
    auto j = static_cast<std::size_t>(std::floor((z - lo_) / bin_width()));
    j = std::min(j, d_ - 1);
    // Snap against the exact edges so boundary values go to the upper bin.
    while (j + 1 < d_ && z >= edge(j + 1)) ++j;
    while (j > 0 && z < edge(j)) --j;
    return j;
  }

  std::vector<double> one_hot(double z) const {
    std::vector<double> v(d_, 0.0);
    v[bin_index(z)] = 1.0;
    return v;
  }

  /// Weighted average of bin centres over activations >= the cutoff, in the
  /// normalized domain. nullopt when every activation is below the cutoff.
  std::optional<double> decode_normalized(std::span<const double> a) const {
    require(a.size() == d_, Errc::dimension_mismatch,
            "activation has " + std::to_string(a.size()) + " bins, quantizer has " +
                std::to_string(d_));
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
      require(a[j] >= 0.0 && a[j] <= 1.0, Errc::invalid_argument,
              "activation outside [0,1]");
      if (a[j] >= kVoicingCutoff) {
        num += a[j] * centers_[j];
        den += a[j];
      }
    }
    if (den <= 0.0) return std::nullopt;
    return num / den;
  }

 private:
  std::size_t d_;
  double lo_, hi_;
  std::vector<double> centers_;
};

inline std::vector<double> f0_to_bins(double normalized, const PitchQuantizer &q) {
  return q.one_hot(normalized);
}

/// Decodes an activation vector to Hz; 0 means unvoiced.
inline double bins_to_f0(std::span<const double> activation, const PitchQuantizer &q,
                         const SpeakerPitchStats &stats) {
  validate(stats);
  const auto z = q.decode_normalized(activation);
  if (!z) return 0.0;
  return std::max(denormalize_value(*z, stats), 0.0);
}

// ---------------------------------------------------------------------------
// CSV formats.

inline std::string format_f0_csv(const PitchTrack &t) {
  std::string out = "time_s,f0_hz,voiced\n";
  char buf[96];
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%d\n", t.time(i), t.f0_hz[i],
                  t.voiced[i] ? 1 : 0);
    out += buf;
  }
  return out;
}

inline PitchTrack parse_f0_csv(const std::string &text) {
  auto lines = io::split_lines(text);
  require(!lines.empty() && lines[0] == "time_s,f0_hz,voiced", Errc::parse,
          "f0 csv: bad header");
  PitchTrack t;
  std::vector<double> times;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto c1 = lines[i].find(','), c2 = lines[i].rfind(',');
    require(c1 != std::string::npos && c2 != c1, Errc::parse,
            "f0 csv: line " + std::to_string(i + 1) + " needs 3 fields");
    times.push_back(io::parse_real(lines[i].substr(0, c1), "f0 csv"));
    const double f0 = io::parse_real(lines[i].substr(c1 + 1, c2 - c1 - 1), "f0 csv");
    const auto v = lines[i].substr(c2 + 1);
    require(v == "0" || v == "1", Errc::parse, "f0 csv: voiced must be 0 or 1");
    require((v == "1") == (f0 > 0.0), Errc::parse,
            "f0 csv: line " + std::to_string(i + 1) + " voicing disagrees with f0");
    t.f0_hz.push_back(f0);
    t.voiced.push_back(v == "1");
  }
  if (times.size() >= 2) t.frame_period = times[1] - times[0];
  else if (times.size() == 1) t.frame_period = 2.0 * times[0];
  // Times are printed with 6 decimals; snap the period back to 0.1 ms.
  t.frame_period = std::round(t.frame_period * 1e4) / 1e4;
  return t;
}

inline std::string format_speaker_stats_csv(std::span<const SpeakerPitchStats> stats) {
  std::string out = "speaker_id,mean_hz,std_hz,n_voiced\n";
  for (const auto &s : stats)
    out += s.speaker_id + ',' + io::format_real(s.mean_hz) + ',' +
           io::format_real(s.std_hz) + ',' + std::to_string(s.n_voiced) + '\n';
  return out;
}

inline std::vector<SpeakerPitchStats> parse_speaker_stats_csv(const std::string &text) {
  auto lines = io::split_lines(text);
  require(!lines.empty() && lines[0] == "speaker_id,mean_hz,std_hz,n_voiced", Errc::parse,
          "speaker stats csv: bad header");
  std::vector<SpeakerPitchStats> out;
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
    require(f.size() == 4, Errc::parse,
            "speaker stats csv: line " + std::to_string(i + 1) + " needs 4 fields");
    SpeakerPitchStats s;
    s.speaker_id = f[0];
    s.mean_hz = io::parse_real(f[1], "speaker stats csv");
    s.std_hz = io::parse_real(f[2], "speaker stats csv");
    s.n_voiced = static_cast<std::size_t>(io::parse_int(f[3], "speaker stats csv"));
    validate(s);
    out.push_back(s);
  }
  return out;
}

}  // namespace unitprosody

#endif  // UNITPROSODY_PITCH_HPP_
