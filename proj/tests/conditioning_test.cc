// tests/conditioning_test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "test_signals.hpp"
#include "unitprosody/conditioning.hpp"
#include "unitprosody/dsp.hpp"

namespace unitprosody {
namespace {

UnitEmbeddingTable toy_table(std::size_t k, std::size_t e, std::uint64_t seed) {
  Rng rng(seed);
  UnitEmbeddingTable t{std::vector<double>(k * e), e};
  for (auto &v : t.values) v = rng.normal();
  return t;
}

ConditioningMatrix constant_conditioning(std::size_t frames, double f0, Unit unit = 1) {
  UnitSequence u{std::vector<Unit>(frames, unit)};
  std::vector<double> f(frames, f0);
  EmotionEmbedding emo;
  return assemble_conditioning(u, toy_table(4, 6, 1), f, emo, std::vector<double>(3, 0.5));
}

// Plain O(N^2) DFT magnitude at integer-Hz bins for a 1 s signal.
double dft_peak_hz(const Waveform &w, double lo, double hi) {
  const std::size_t n = w.samples.size();
  double best = -1.0, best_f = 0.0;
  for (double f = lo; f <= hi; f += 1.0) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += w.samples[i] * std::polar(1.0, -2.0 * std::numbers::pi * f * i / w.sample_rate);
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      best_f = f;
    }
  }
  return best_f;
}

// Welch power spectrum: mean periodogram over 512-sample Hann segments.
std::vector<double> welch(const Waveform &w) {
  const std::size_t seg = 512;
  auto win = dsp::hann(seg);
  std::vector<double> psd(seg / 2 + 1, 0.0);
  std::size_t count = 0;
  for (std::size_t start = 0; start + seg <= w.samples.size(); start += seg / 2) {
    std::vector<double> f(seg);
    for (std::size_t i = 0; i < seg; ++i) f[i] = w.samples[start + i] * win[i];
    auto mag = dsp::magnitude_spectrum(f, seg);
    for (std::size_t k = 0; k < psd.size(); ++k) psd[k] += mag[k] * mag[k];
    ++count;
  }
  for (auto &p : psd) p /= static_cast<double>(count);
  return psd;
}

TEST(InterpolateF0, IdentityAtSameRate) {
  auto t = PitchTrack::from_f0({100, 110, 0, 0, 130, 140}, 0.02);
  auto out = interpolate_f0(t, 50.0);
  EXPECT_EQ(out, t.f0_hz);
}

TEST(InterpolateF0, RampStaysOnLine) {
  std::vector<double> f(10);
  for (int i = 0; i < 10; ++i) f[i] = 100.0 + 100.0 * i / 9.0;
  auto out = interpolate_f0(PitchTrack::from_f0(f, 0.02), 100.0);
  ASSERT_EQ(out.size(), 20u);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double expected = 100.0 + 100.0 * (j / 19.0);
    EXPECT_NEAR(out[j], expected, 1e-9);
  }
}

TEST(InterpolateF0, EndpointsPreservedAtAnyRate) {
  Rng rng(3);
  std::vector<double> f(37);
  for (auto &v : f) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(80, 300);
  auto t = PitchTrack::from_f0(f, 0.01);
  for (double rate : {7.0, 33.0, 50.0, 100.0, 250.0}) {
    auto out = interpolate_f0(t, rate);
    EXPECT_EQ(out.front(), f.front());
    EXPECT_EQ(out.back(), f.back());
    EXPECT_EQ(out.size(), static_cast<std::size_t>(std::lround(0.37 * rate)));
  }
  EXPECT_THROW(interpolate_f0(PitchTrack{}, 50.0), Error);
}

TEST(InterpolateF0, UnvoicedRunsHoldZero) {
  auto t = PitchTrack::from_f0({200, 0, 0, 0, 200}, 0.02);
  auto out = interpolate_f0(t, 200.0);
  for (std::size_t j = 0; j < out.size(); ++j) EXPECT_TRUE(out[j] == 0.0 || out[j] == 200.0);
}

TEST(Assemble, ShapeAndReplication) {
  UnitSequence u{{0, 1, 1, 0}};
  std::vector<double> f0{100, 0, 120, 130};
  EmotionEmbedding emo;
  for (std::size_t i = 0; i < kEmotionDim; ++i) emo.values[i] = 0.01 * i;
  std::vector<double> spk{1.0, 2.0, 3.0};
  auto m = assemble_conditioning(u, toy_table(2, 2, 5), f0, emo, spk);
  EXPECT_EQ(m.rows, 4u);
  EXPECT_EQ(m.cols(), 102u);
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t i = 0; i < kEmotionDim; ++i)
      EXPECT_EQ(m.at(t, m.emotion_col() + i), static_cast<float>(emo.values[i]));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(m.at(t, m.speaker_col() + i), static_cast<float>(spk[i]));
    EXPECT_EQ(m.at(t, m.f0_col()), static_cast<float>(f0[t]));
  }
}

TEST(Assemble, UnalignedStreams) {
  UnitSequence u{std::vector<Unit>(10, 0)};
  std::vector<double> f0(9, 100.0);
  try {
    assemble_conditioning(u, toy_table(2, 2, 5), f0, EmotionEmbedding{}, std::vector<double>{});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::unaligned);
    EXPECT_NE(std::string(e.what()).find("unaligned streams"), std::string::npos);
  }
}

TEST(Synthesize, LengthArithmetic) {
  for (std::size_t frames : {1u, 7u, 50u})
    EXPECT_EQ(toy_synthesize(constant_conditioning(frames, 150.0), 16000).samples.size(), frames * 320);
}

TEST(Synthesize, VoicedPeakAtF0) {
  auto w = toy_synthesize(constant_conditioning(50, 220.0), 16000);
  EXPECT_NEAR(dft_peak_hz(w, 100.0, 400.0), 220.0, 5.0);
}

TEST(Synthesize, UnvoicedIsQuietAndFlat) {
  auto w = toy_synthesize(constant_conditioning(50, 0.0), 16000);
  double ss = 0.0;
  for (double s : w.samples) ss += s * s;
  const double rms_db = 10.0 * std::log10(ss / w.samples.size());
  EXPECT_LT(rms_db, -30.0);
  auto psd = welch(w);
  auto sorted = psd;
  std::sort(sorted.begin(), sorted.end());
  const double floor = sorted[sorted.size() / 2];
  const double peak = sorted.back();
  EXPECT_LT(10.0 * std::log10(peak / floor), 6.0);
}

TEST(Synthesize, NyquistAndHopChecks) {
  EXPECT_THROW(toy_synthesize(constant_conditioning(3, 8000.0), 16000), Error);
  auto m = constant_conditioning(3, 100.0);
  m.frame_period = 0.02003;
  EXPECT_THROW(toy_synthesize(m, 16000), Error);
}

TEST(Synthesize, PhaseContinuity) {
  // Gliding f0 on one unit: harmonic amplitudes are constant, so every
  // sample step is bounded by the stack's maximum slope.
  const std::size_t frames = 60;
  UnitSequence u{std::vector<Unit>(frames, 2)};
  std::vector<double> f0(frames);
  double f_max = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    f0[t] = 150.0 + 60.0 * std::sin(t * 0.2);
    f_max = std::max(f_max, f0[t]);
  }
  auto table = toy_table(4, 6, 1);
  auto m = assemble_conditioning(u, table, f0, EmotionEmbedding{}, std::vector<double>{});
  SynthConfig cfg;
  auto w = toy_synthesize(m, 16000, cfg);
  auto amp = harmonic_amplitudes(m.row(0).subspan(0, m.unit_dim), cfg);
  double bound = 0.0;
  for (std::size_t h = 0; h < amp.size(); ++h)
    bound += cfg.voiced_gain * amp[h] * 2.0 * std::numbers::pi * (h + 1) * f_max / 16000.0;
  double worst = 0.0;
  for (std::size_t n = 1; n < w.samples.size(); ++n)
    worst = std::max(worst, std::abs(w.samples[n] - w.samples[n - 1]));
  EXPECT_LE(worst, bound * (1.0 + 1e-9));
  EXPECT_GT(worst, 0.2 * bound);
}

TEST(Synthesize, TrackerRecoversConstantPitch) {
  auto w = toy_synthesize(constant_conditioning(50, 180.0, 3), 16000);
  auto t = track_f0(w);
  EXPECT_NEAR(testing::median(testing::voiced_values(t)), 180.0, 2.0);
}

TEST(Formats, ConditioningRoundTripIsBitExact) {
  auto m = constant_conditioning(5, 123.456);
  auto bytes = encode_conditioning(m);
  EXPECT_EQ(bytes.substr(0, 5), "CND1 ");
  auto back = decode_conditioning(bytes);
  EXPECT_EQ(back, m);
  EXPECT_EQ(encode_conditioning(back), bytes);
  EXPECT_THROW(decode_conditioning(bytes.substr(0, bytes.size() - 2)), Error);
}

}  // namespace
}  // namespace unitprosody
