// tests/test_signals.hpp

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

#ifndef UNITPROSODY_TESTS_TEST_SIGNALS_HPP_
#define UNITPROSODY_TESTS_TEST_SIGNALS_HPP_

// Analytic test signals shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "unitprosody/pitch.hpp"
#include "unitprosody/waveform.hpp"

namespace unitprosody::testing {

inline Waveform sine(double f, double seconds, int fs = 16000, double amp = 0.5) {
  Waveform w;
  w.sample_rate = fs;
  w.samples.resize(static_cast<std::size_t>(seconds * fs));
  for (std::size_t n = 0; n < w.samples.size(); ++n)
    w.samples[n] = amp * std::sin(2.0 * std::numbers::pi * f * n / fs);
  return w;
}

inline Waveform sawtooth(double f, double seconds, int fs = 16000, double amp = 0.5) {
  Waveform w;
  w.sample_rate = fs;
  w.samples.resize(static_cast<std::size_t>(seconds * fs));
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    const double phase = std::fmod(f * n / fs, 1.0);
    w.samples[n] = amp * (2.0 * phase - 1.0);
  }
  return w;
}

// Harmonic stack with 1/h amplitudes up to Nyquist.
inline Waveform harmonic(double f, double seconds, int fs = 16000, double amp = 0.3) {
  Waveform w;
  w.sample_rate = fs;
  w.samples.resize(static_cast<std::size_t>(seconds * fs));
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    double s = 0.0;
    for (int h = 1; h * f < fs / 2.0 && h <= 10; ++h)
      s += std::sin(2.0 * std::numbers::pi * h * f * n / fs) / h;
    w.samples[n] = amp * s;
  }
  return w;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline std::vector<double> voiced_values(const PitchTrack &t) {
  std::vector<double> v;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.voiced[i]) v.push_back(t.f0_hz[i]);
  return v;
}

// Fraction of voiced frames nearer to an octave jump than to `f`.
inline double octave_error_rate(const PitchTrack &t, double f) {
  std::size_t n = 0, bad = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t.voiced[i]) continue;
    ++n;
    if (std::abs(std::log2(t.f0_hz[i] / f)) > 0.5) ++bad;
  }
  return n ? static_cast<double>(bad) / n : 0.0;
}

inline double voiced_fraction(const PitchTrack &t) {
  if (t.size() == 0) return 0.0;
  return static_cast<double>(std::count(t.voiced.begin(), t.voiced.end(), true)) / t.size();
}

}  // namespace unitprosody::testing

#endif  // UNITPROSODY_TESTS_TEST_SIGNALS_HPP_
