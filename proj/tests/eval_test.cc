// tests/eval_test.cc

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

#include <algorithm>
#include <numbers>
#include <set>

#include "stats_oracle.hpp"
#include "test_signals.hpp"
#include "unitprosody/acoustic_features.hpp"
#include "unitprosody/bleu.hpp"
#include "unitprosody/random.hpp"
#include "unitprosody/slda.hpp"
#include "unitprosody/stats.hpp"

namespace unitprosody {
namespace {

// ---------------------------------------------------------------- BLEU

// Brute-force clipped n-gram precision: for every hypothesis n-gram
// position, count it as matched while its running count stays within the
// reference count.
std::pair<std::size_t, std::size_t> brute_force_precision(const Tokens &hyp, const Tokens &ref,
                                                          std::size_t n) {
  auto gram = [&](const Tokens &t, std::size_t i) { return Tokens(t.begin() + i, t.begin() + i + n); };
  std::size_t matched = 0, total = 0;
  std::vector<Tokens> seen;
  for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
    const auto g = gram(hyp, i);
    ++total;
    std::size_t in_ref = 0;
    for (std::size_t j = 0; j + n <= ref.size(); ++j) in_ref += gram(ref, j) == g;
    const auto used = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), g));
    if (used < in_ref) ++matched;
    seen.push_back(g);
  }
  return {matched, total};
}

TEST(Bleu, IdenticalCorpusScores100) {
  auto c = TokenizedCorpus::from_lines({"the cat sat on the mat", "a quick brown fox jumps"},
                                       {"the cat sat on the mat", "a quick brown fox jumps"});
  EXPECT_DOUBLE_EQ(bleu(c), 100.0);
}

TEST(Bleu, ClippedUnigramPrecision) {
  // "the" occurs once in the reference, so only one of four hypothesis
  // tokens counts.
  auto c = TokenizedCorpus::from_lines({"the the the the"}, {"the cat"});
  auto s = bleu_stats(c);
  auto [m, t] = brute_force_precision(c.hypotheses[0], c.references[0], 1);
  EXPECT_EQ(m, 1u);
  EXPECT_EQ(t, 4u);
  EXPECT_EQ(s.matches[0], m);
  EXPECT_EQ(s.totals[0], t);
  EXPECT_DOUBLE_EQ(s.precision(1), 0.25);

  auto twice = bleu_stats(TokenizedCorpus::from_lines({"the the the the"}, {"the cat on the mat"}));
  EXPECT_DOUBLE_EQ(twice.precision(1), 0.5);
}

TEST(Bleu, MatchesBruteForceOnRandomCorpora) {
  Rng rng(5);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 50; ++trial) {
    TokenizedCorpus c;
    for (int seg = 0; seg < 4; ++seg) {
      Tokens h, r;
      for (std::size_t i = rng.index(12); i > 0; --i) h.push_back(vocab[rng.index(5)]);
      for (std::size_t i = 1 + rng.index(12); i > 0; --i) r.push_back(vocab[rng.index(5)]);
      c.hypotheses.push_back(h);
      c.references.push_back(r);
    }
    auto s = bleu_stats(c);
    for (std::size_t n = 1; n <= 4; ++n) {
      std::size_t m = 0, t = 0;
      for (std::size_t seg = 0; seg < 4; ++seg) {
        auto [mm, tt] = brute_force_precision(c.hypotheses[seg], c.references[seg], n);
        m += mm;
        t += tt;
      }
      ASSERT_EQ(s.matches[n - 1], m);
      ASSERT_EQ(s.totals[n - 1], t);
    }
  }
}

TEST(Bleu, EmptyHypothesisScoresZero) {
  auto c = TokenizedCorpus::from_lines({""}, {"some reference words here"});
  EXPECT_EQ(bleu(c), 0.0);
  EXPECT_THROW(bleu(TokenizedCorpus{}), Error);
  EXPECT_THROW(TokenizedCorpus::from_lines({"a"}, {}), Error);
}

TEST(Bleu, BrevityPenalty) {
  auto c = TokenizedCorpus::from_lines({"a b c d"}, {"a b c d e f g h"});
  auto s = bleu_stats(c);
  EXPECT_NEAR(s.brevity_penalty(), std::exp(1.0 - 8.0 / 4.0), 1e-15);
  EXPECT_NEAR(s.score(), 100.0 * std::exp(-1.0), 1e-9);
}

TEST(Bleu, PermutationInvariant) {
  std::vector<std::string> hyp{"the cat is on the mat", "there is a cat here", "hello world again",
                               "it is a nice day today"};
  std::vector<std::string> ref{"the cat sat on the mat", "a cat is here", "hello big world again",
                               "today is a nice day"};
  const double base = bleu(TokenizedCorpus::from_lines(hyp, ref));
  std::vector<std::size_t> order{0, 1, 2, 3};
  while (std::next_permutation(order.begin(), order.end())) {
    std::vector<std::string> h, r;
    for (auto i : order) {
      h.push_back(hyp[i]);
      r.push_back(ref[i]);
    }
    EXPECT_DOUBLE_EQ(bleu(TokenizedCorpus::from_lines(h, r)), base);
  }
}

TEST(Bleu, TokenizationAndCasing) {
  EXPECT_EQ(tokenize("Hello, world!"), (Tokens{"Hello", ",", "world", "!"}));
  EXPECT_EQ(tokenize("Hello, World", true), (Tokens{"hello", ",", "world"}));
  auto mixed = TokenizedCorpus::from_lines({"The Cat sat on the mat"}, {"the cat sat on the mat"});
  EXPECT_LT(bleu(mixed), 100.0);
  auto lowered = TokenizedCorpus::from_lines({"The Cat sat on the mat"}, {"the cat sat on the mat"}, true);
  EXPECT_DOUBLE_EQ(bleu(lowered), 100.0);
}

// ---------------------------------------------------------------- stats

TEST(Anova, HandComputedCases) {
  std::vector<std::vector<double>> g{{1, 2, 3}, {4, 5, 6}};
  auto r = stats::anova_oneway(g);
  EXPECT_NEAR(r.f, 13.5, 1e-9);
  EXPECT_NEAR(r.p, testing::f_upper_tail_quadrature(13.5, 1, 4), 1e-6);

  std::vector<std::vector<double>> same{{1, 2, 3}, {1, 2, 3}};
  r = stats::anova_oneway(same);
  EXPECT_EQ(r.f, 0.0);
  EXPECT_EQ(r.p, 1.0);

  std::vector<std::vector<double>> degenerate{{1, 1}, {2, 2}};
  EXPECT_THROW(stats::anova_oneway(degenerate), Error);
  std::vector<std::vector<double>> tiny{{1}, {2, 3}};
  EXPECT_THROW(stats::anova_oneway(tiny), Error);
}

TEST(Anova, InvariantToShiftAndScale) {
  Rng rng(2);
  std::vector<std::vector<double>> g(3);
  for (auto &grp : g)
    for (int i = 0; i < 8; ++i) grp.push_back(rng.normal(0.5 * (&grp - g.data()), 1.0));
  const double f = stats::anova_oneway(g).f;
  auto shifted = g, scaled = g;
  for (auto &grp : shifted)
    for (auto &x : grp) x += 17.0;
  for (auto &grp : scaled)
    for (auto &x : grp) x *= 3.5;
  EXPECT_NEAR(stats::anova_oneway(shifted).f, f, 1e-9 * f);
  EXPECT_NEAR(stats::anova_oneway(scaled).f, f, 1e-9 * f);
}

TEST(Anova, NullDistributionRarelySignificant) {
  Rng rng(7);
  int ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::vector<double>> g(3, std::vector<double>(30));
    for (auto &grp : g)
      for (auto &x : grp) x = rng.normal();
    ok += stats::anova_oneway(g).p > 0.001;
  }
  EXPECT_GE(ok, 990);
}

TEST(Anova, PairwiseComparisons) {
  std::vector<std::vector<double>> g{{1, 2, 3}, {4, 5, 6}, {1, 2, 3}};
  auto pc = stats::pairwise_comparisons(g);
  ASSERT_EQ(pc.size(), 3u);
  EXPECT_DOUBLE_EQ(pc[0].mean_diff, -3.0);
  // Pooled MSW = 1 with 6 df; se = sqrt(2/3).
  EXPECT_NEAR(pc[0].t, -3.0 / std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_NEAR(pc[0].p, testing::t_two_sided_quadrature(pc[0].t, 6), 1e-9);
  EXPECT_EQ(pc[1].mean_diff, 0.0);
  EXPECT_EQ(pc[1].p, 1.0);
}

TEST(Pearson, HandComputedCases) {
  std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 4};
  auto r = stats::pearson(x, y);
  EXPECT_NEAR(r.rho, 0.8, 1e-9);
  const double t = 0.8 * std::sqrt(2.0 / (1.0 - 0.64));
  EXPECT_NEAR(r.p, testing::t_two_sided_quadrature(t, 2), 1e-6);

  std::vector<double> lin, neg;
  for (double v : x) {
    lin.push_back(2 * v + 1);
    neg.push_back(-v);
  }
  EXPECT_NEAR(stats::pearson(x, lin).rho, 1.0, 1e-12);
  EXPECT_NEAR(stats::pearson(x, neg).rho, -1.0, 1e-12);

  std::vector<double> flat{2, 2, 2, 2};
  try {
    stats::pearson(x, flat);
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("zero variance"), std::string::npos);
  }
  EXPECT_THROW(stats::pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
}

TEST(Pearson, AffineInvariance) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(20), y(20);
    for (std::size_t i = 0; i < 20; ++i) {
      x[i] = rng.normal();
      y[i] = 0.3 * x[i] + rng.normal();
    }
    const double rho = stats::pearson(x, y).rho;
    const double a = rng.uniform(0.1, 10), b = rng.uniform(-5, 5);
    std::vector<double> xt(x);
    for (auto &v : xt) v = a * v + b;
    ASSERT_NEAR(stats::pearson(xt, y).rho, rho, 1e-12);
  }
}

TEST(TailProbabilities, MatchQuadrature) {
  for (double d1 : {1.0, 2.0, 3.0, 5.0})
    for (double d2 : {2.0, 4.0, 17.0, 87.0, 296.0})
      for (double f : {0.05, 0.5, 1.0, 2.5, 4.11, 13.5, 80.0})
        EXPECT_NEAR(stats::f_upper_tail(f, d1, d2), testing::f_upper_tail_quadrature(f, d1, d2), 1e-6)
            << d1 << " " << d2 << " " << f;
  for (double nu : {1.0, 2.0, 5.0, 28.0, 100.0})
    for (double t : {0.0, 0.3, 1.0, 2.0, 4.5, -3.0})
      EXPECT_NEAR(stats::t_two_sided(t, nu), testing::t_two_sided_quadrature(t, nu), 1e-6) << nu << " " << t;
}

// ---------------------------------------------------------------- distance

TEST(StandardizedEuclidean, HandArithmetic) {
  FeatureVector ones;
  ones.fill(1.0);
  FeatureVector a{1, 2, 2, 0, 0, 0}, zero{};
  EXPECT_EQ(standardized_euclidean(a, a, ones), 0.0);
  EXPECT_DOUBLE_EQ(standardized_euclidean(a, zero, ones), 3.0);
  FeatureVector one_diff{0, 0, 0, 1, 0, 0};
  EXPECT_DOUBLE_EQ(standardized_euclidean(one_diff, zero, ones), 1.0);
  EXPECT_EQ(standardized_euclidean(a, zero, ones), standardized_euclidean(zero, a, ones));
  FeatureVector zero_scale{};
  EXPECT_TRUE(std::isfinite(standardized_euclidean(a, zero, zero_scale)));
}

// ---------------------------------------------------------------- features

TEST(Features, PureSineHasStrongFirstHarmonic) {
  auto w = testing::sine(200.0, 1.0);
  auto t = track_f0(w);
  auto f = extract_features(w, t);
  EXPECT_GE(f[4], 20.0);
  for (double v : f) EXPECT_TRUE(std::isfinite(v));
}

TEST(Features, SilenceIsAllZero) {
  Waveform w;
  w.samples.assign(16000, 0.0);
  auto f = extract_features(w, track_f0(w));
  for (double v : f) EXPECT_EQ(v, 0.0);
}

TEST(Features, MisalignedInputs) {
  auto w = testing::sine(200.0, 1.0);
  auto t = track_f0(w);
  t.f0_hz.pop_back();
  t.voiced.pop_back();
  EXPECT_THROW(extract_features(w, t), Error);
}

TEST(Features, RisingSlopeStdFromTwoRamps) {
  // Two voiced segments of n frames, rising linearly in semitones at rates
  // r1 and r2, separated by unvoiced frames. Endpoint smoothing shortens
  // each rise by one frame step: slope = r (n-2)/(n-1).
  const double dt = 0.01, r1 = 20.0, r2 = 50.0;
  const std::size_t n = 10;
  std::vector<double> f0;
  for (std::size_t i = 0; i < n; ++i) f0.push_back(27.5 * std::pow(2.0, (40.0 + r1 * i * dt) / 12.0));
  for (int i = 0; i < 3; ++i) f0.push_back(0.0);
  for (std::size_t i = 0; i < n; ++i) f0.push_back(27.5 * std::pow(2.0, (40.0 + r2 * i * dt) / 12.0));
  auto track = PitchTrack::from_f0(f0, dt);
  auto w = testing::sine(200.0, f0.size() * dt);
  auto f = extract_features(w, track);
  const double s1 = r1 * (n - 2.0) / (n - 1.0), s2 = r2 * (n - 2.0) / (n - 1.0);
  EXPECT_NEAR(f[2], std::abs(s1 - s2) / 2.0, 1e-6);
}

TEST(Features, SpectralSlopeSign) {
  // Unvoiced noise through a one-pole lowpass tilts down; a first
  // difference tilts up.
  Rng rng(1);
  Waveform low, high;
  double prev = 0.0, x_prev = 0.0;
  for (int i = 0; i < 16000; ++i) {
    const double x = 0.1 * rng.normal();
    prev = 0.9 * prev + 0.1 * x;
    low.samples.push_back(prev);
    high.samples.push_back(x - x_prev);
    x_prev = x;
  }
  auto unvoiced = PitchTrack::from_f0(std::vector<double>(100, 0.0), 0.01);
  EXPECT_LT(extract_features(low, unvoiced)[0], 0.0);
  EXPECT_GT(extract_features(high, unvoiced)[0], 0.0);
}

TEST(Features, F1BandwidthOfResonator) {
  // Pulse train at 100 Hz through a two-pole resonator at 500 Hz with an
  // 80 Hz bandwidth.
  const int fs = 16000;
  const double fc = 500.0, bw = 80.0;
  const double r = std::exp(-std::numbers::pi * bw / fs);
  const double a1 = 2 * r * std::cos(2 * std::numbers::pi * fc / fs), a2 = -r * r;
  Waveform w;
  double y1 = 0, y2 = 0;
  for (int n = 0; n < fs; ++n) {
    const double x = n % 160 == 0 ? 1.0 : 0.0;
    const double y = x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    w.samples.push_back(0.05 * y);
  }
  auto track = PitchTrack::from_f0(std::vector<double>(100, 100.0), 0.01);
  auto f = extract_features(w, track);
  EXPECT_GT(f[3], 0.5 * bw);
  EXPECT_LT(f[3], 2.0 * bw);
}

TEST(Features, CsvRoundTrip) {
  std::vector<std::pair<std::string, FeatureVector>> rows{{"u1", {0.5, -0.25, 1, 2, 3, 4}}};
  auto text = format_feature_csv(rows);
  EXPECT_EQ(text.substr(0, 13), "utterance_id,");
  auto back = parse_feature_csv(text);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], rows[0]);
  EXPECT_THROW(parse_feature_csv("id,a\n"), Error);
}

// ---------------------------------------------------------------- SLDA

TEST(Slda, NoBetweenClassScatter) {
  // Same values in both classes: lambda = 1, F = 0.
  Eigen::MatrixXd x(8, 1);
  x << 1, 2, 3, 4, 1, 2, 3, 4;
  std::vector<int> labels{0, 0, 0, 0, 1, 1, 1, 1};
  auto r = forward_slda(x, labels);
  EXPECT_TRUE(r.selected.empty());
  ASSERT_TRUE(r.rejected.has_value());
  EXPECT_NEAR(r.rejected->wilks_lambda, 1.0, 1e-12);
  EXPECT_NEAR(r.rejected->f_stat, 0.0, 1e-9);
}

TEST(Slda, Preconditions) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  EXPECT_THROW(forward_slda(x, std::vector<int>{0, 0, 0}), Error);
  EXPECT_THROW(forward_slda(x, std::vector<int>{0, 1, 2}), Error);
  Eigen::MatrixXd dup(6, 2);
  dup << 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6;
  // A duplicated feature adds nothing once its twin is in.
  auto r = forward_slda(dup, std::vector<int>{0, 0, 0, 1, 1, 1}, 0.5);
  EXPECT_EQ(r.selected.size(), 1u);
}

TEST(Slda, KnownTwoVariableLambda) {
  // Wilks' lambda for a 1-D, 2-class case is SSW / SST.
  Eigen::MatrixXd x(6, 1);
  x << 1, 2, 3, 4, 5, 6;
  std::vector<int> labels{0, 0, 0, 1, 1, 1};
  auto s = scatter_matrices(x, labels);
  EXPECT_NEAR(wilks_lambda(s, {0}), 4.0 / 17.5, 1e-12);
  auto r = forward_slda(x, labels, 0.5);
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_NEAR(r.steps[0].f_stat, 13.5, 1e-9);  // equals the ANOVA F
}

// Three classes of 100, six features. Feature 0 separates class 1 and
// feature 1 separates class 2 by five standard deviations; the rest are
// noise.
struct SldaData {
  Eigen::MatrixXd x;
  std::vector<int> labels;
};

SldaData three_class(std::uint64_t seed) {
  Rng rng(seed);
  SldaData d{Eigen::MatrixXd(300, 6), {}};
  for (int i = 0; i < 300; ++i) {
    const int c = i / 100;
    d.labels.push_back(c);
    for (int j = 0; j < 6; ++j) d.x(i, j) = rng.normal();
    d.x(i, 0) += c == 1 ? 5.0 : 0.0;
    d.x(i, 1) += c == 2 ? 5.0 : 0.0;
  }
  return d;
}

TEST(Slda, SelectsInformativePairAgainstExhaustiveOracle) {
  auto d = three_class(11);
  auto r = forward_slda(d.x, d.labels, 0.01);
  ASSERT_EQ(r.selected.size(), 2u);
  EXPECT_EQ(std::set<std::size_t>(r.selected.begin(), r.selected.end()), (std::set<std::size_t>{0, 1}));

  // Exhaustive search: among all pairs, {0, 1} has the smallest lambda, and
  // the first pick is the best single feature.
  auto s = scatter_matrices(d.x, d.labels);
  double best_pair = 2.0;
  std::set<std::size_t> best;
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a + 1; b < 6; ++b) {
      const double lam = wilks_lambda(s, {a, b});
      if (lam < best_pair) {
        best_pair = lam;
        best = {a, b};
      }
    }
  EXPECT_EQ(best, (std::set<std::size_t>{0, 1}));
  EXPECT_NEAR(r.steps[1].wilks_lambda, best_pair, 1e-12);
  std::size_t best_single = 0;
  for (std::size_t a = 1; a < 6; ++a)
    if (wilks_lambda(s, {a}) < wilks_lambda(s, {best_single})) best_single = a;
  EXPECT_EQ(r.selected[0], best_single);
}

TEST(Slda, LambdaNonIncreasing) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto d = three_class(seed);
    auto r = forward_slda(d.x, d.labels, 1.0);
    double prev = 1.0;
    for (const auto &st : r.steps) {
      EXPECT_LE(st.wilks_lambda, prev + 1e-12);
      prev = st.wilks_lambda;
    }
  }
}

TEST(Slda, InvariantToStandardization) {
  auto d = three_class(4);
  auto r = forward_slda(d.x, d.labels, 1.0);
  Eigen::MatrixXd z = d.x;
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double mean = z.col(j).mean();
    const double sd = std::sqrt((z.col(j).array() - mean).square().sum() / (z.rows() - 1));
    z.col(j) = ((z.col(j).array() - mean) / sd * (j + 1.0) + 3.0 * j).matrix();
  }
  auto rz = forward_slda(z, d.labels, 1.0);
  ASSERT_EQ(rz.selected, r.selected);
  for (std::size_t i = 0; i < r.steps.size(); ++i)
    EXPECT_NEAR(rz.steps[i].wilks_lambda, r.steps[i].wilks_lambda, 1e-9);
}

}  // namespace
}  // namespace unitprosody
