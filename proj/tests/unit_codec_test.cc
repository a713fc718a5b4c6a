// tests/unit_codec_test.cc

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
#include <array>

#include "unitprosody/unit_codec.hpp"

namespace unitprosody {
namespace {

UnitSequence random_sequence(Rng &rng, std::size_t max_len, std::size_t alphabet) {
  UnitSequence s;
  const std::size_t len = rng.index(max_len + 1);
  // Mix long runs and singletons so both branches of reduce() are hit.
  while (s.units.size() < len) {
    const Unit u = static_cast<Unit>(rng.index(alphabet));
    const std::size_t run = 1 + (rng.uniform() < 0.5 ? 0 : rng.index(8));
    for (std::size_t i = 0; i < run && s.units.size() < len; ++i) s.units.push_back(u);
  }
  return s;
}

TEST(Reduce, WorkedExample) {
  UnitSequence s{{0, 0, 1, 1, 1, 2}};
  auto r = reduce(s);
  EXPECT_EQ(r.units, (std::vector<Unit>{0, 1, 2}));
  EXPECT_EQ(r.durations, (std::vector<std::int32_t>{2, 3, 1}));
  EXPECT_EQ(expand(r).units, s.units);
}

TEST(Reduce, SingletonAndSingleRun) {
  auto r = reduce(UnitSequence{{5}});
  EXPECT_EQ(r.units, std::vector<Unit>{5});
  EXPECT_EQ(r.durations, std::vector<std::int32_t>{1});
  r = reduce(UnitSequence{{7, 7, 7, 7}});
  EXPECT_EQ(r.units, std::vector<Unit>{7});
  EXPECT_EQ(r.durations, std::vector<std::int32_t>{4});
}

TEST(Reduce, EmptyIsIdentity) {
  EXPECT_TRUE(reduce(UnitSequence{}).units.empty());
  EXPECT_TRUE(expand(ReducedUnitSequence{}).units.empty());
}

TEST(Expand, RejectsNonPositiveDuration) {
  ReducedUnitSequence r{{1, 2}, {1, 0}};
  try {
    expand(r);
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::invalid_duration);
    EXPECT_NE(std::string(e.what()).find("invalid duration"), std::string::npos);
  }
  EXPECT_EQ(expand(ReducedUnitSequence{{3}, {1}}).units, std::vector<Unit>{3});
}

TEST(Reduce, RoundTripProperty) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t alphabet = 1 + rng.index(1000);
    auto s = random_sequence(rng, 3000, alphabet);
    auto r = reduce(s);
    ASSERT_EQ(r.units.size(), r.durations.size());
    for (std::size_t i = 1; i < r.units.size(); ++i) ASSERT_NE(r.units[i], r.units[i - 1]);
    ASSERT_EQ(expand(r).units, s.units);
    ASSERT_EQ(reduce(expand(r)), r);
  }
}

TEST(Quantize, NearestWithLowestIndexTies) {
  Codebook cb;
  cb.dim = 1;
  for (int k = 0; k < 8; ++k) cb.centroids.push_back(k * 10.0);
  FrameFeatures f({70.0}, 1);
  EXPECT_EQ(quantize(f, cb).units, std::vector<Unit>{7});

  Codebook tie;
  tie.dim = 2;
  // Centroids 2 and 5 are equidistant from the origin; 0,1,3,4 are far away.
  tie.centroids = {100, 100, 100, 100, 1, 0, 100, 100, 100, 100, 0, 1};
  EXPECT_EQ(quantize(FrameFeatures({0.0, 0.0}, 2), tie).units, std::vector<Unit>{2});
}

TEST(Quantize, LengthAndDeterminism) {
  Rng rng(3);
  std::vector<double> v(50 * 3);
  for (auto &x : v) x = rng.normal();
  FrameFeatures f(v, 3);
  Codebook cb;
  cb.dim = 3;
  for (int i = 0; i < 4 * 3; ++i) cb.centroids.push_back(rng.normal());
  auto a = quantize(f, cb), b = quantize(f, cb);
  EXPECT_EQ(a.units.size(), 50u);
  EXPECT_EQ(a, b);
}

TEST(Quantize, DimensionMismatch) {
  Codebook cb{{0.0, 0.0}, 2};
  EXPECT_THROW(quantize(FrameFeatures({1.0, 2.0, 3.0}, 3), cb), Error);
}

TEST(KMeans, DistinctPointsAreTheirOwnCentroids) {
  std::vector<FrameFeatures> data{FrameFeatures({0, 0, 5, 5, -3, 1}, 2)};
  auto res = kmeans_fit_report(data, 3, 50, 1);
  std::vector<std::array<double, 2>> got;
  for (std::size_t k = 0; k < 3; ++k)
    got.push_back({res.codebook.centroid(k)[0], res.codebook.centroid(k)[1]});
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::array<double, 2>>{{-3, 1}, {0, 0}, {5, 5}}));
  EXPECT_DOUBLE_EQ(inertia(data, res.codebook), 0.0);
}

TEST(KMeans, TwoModesMatchBruteForceMeans) {
  Rng rng(5);
  FrameFeatures f;
  for (int i = 0; i < 200; ++i) {
    const double m = i % 2 ? 10.0 : -10.0;
    std::array<double, 2> p{m + rng.normal(), m + rng.normal()};
    f.push_back(p);
  }
  // Oracle: assign every point to its nearest mode and average.
  std::array<std::array<double, 2>, 2> mean{};
  std::array<int, 2> count{};
  for (std::size_t i = 0; i < f.num_frames(); ++i) {
    auto p = f.frame(i);
    const double dpos = (p[0] - 10) * (p[0] - 10) + (p[1] - 10) * (p[1] - 10);
    const double dneg = (p[0] + 10) * (p[0] + 10) + (p[1] + 10) * (p[1] + 10);
    const int c = dpos < dneg ? 0 : 1;
    mean[c][0] += p[0];
    mean[c][1] += p[1];
    ++count[c];
  }
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < 2; ++j) mean[c][j] /= count[c];

  std::vector<FrameFeatures> data{f};
  auto cb = kmeans_fit(data, 2, 100, 42);
  for (std::size_t k = 0; k < 2; ++k) {
    auto c = cb.centroid(k);
    const int mode = c[0] > 0 ? 0 : 1;
    EXPECT_NEAR(c[0], mean[mode][0], 1e-9);
    EXPECT_NEAR(c[1], mean[mode][1], 1e-9);
    const double m = mode == 0 ? 10.0 : -10.0;
    EXPECT_LT(std::hypot(c[0] - m, c[1] - m), 0.5);
  }
}

TEST(KMeans, InsufficientData) {
  std::vector<FrameFeatures> data{FrameFeatures({0, 0, 1, 1}, 2)};
  try {
    kmeans_fit(data, 5, 10, 0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::insufficient_data);
    EXPECT_NE(std::string(e.what()).find("insufficient data"), std::string::npos);
  }
  std::vector<FrameFeatures> none;
  EXPECT_THROW(kmeans_fit(none, 1, 10, 0), Error);
}

TEST(KMeans, InertiaNonIncreasingAndSeedDeterministic) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(400 * 4);
    for (auto &x : v) x = rng.normal() + (rng.uniform() < 0.3 ? 4.0 : 0.0);
    std::vector<FrameFeatures> data{FrameFeatures(v, 4)};
    auto a = kmeans_fit_report(data, 8, 60, trial);
    for (std::size_t i = 1; i < a.inertia.size(); ++i)
      ASSERT_LE(a.inertia[i], a.inertia[i - 1] + 1e-9);
    auto b = kmeans_fit_report(data, 8, 60, trial);
    ASSERT_EQ(a.codebook.centroids, b.codebook.centroids);
  }
}

TEST(Formats, UnitAndReducedLines) {
  UnitSequence s{{3, 3, 9, 0}};
  EXPECT_EQ(format_units(s), "3 3 9 0");
  EXPECT_EQ(parse_units("3 3 9 0").units, s.units);
  auto r = reduce(s);
  EXPECT_EQ(format_reduced(r), "3:2 9:1 0:1");
  EXPECT_EQ(parse_reduced("3:2 9:1 0:1"), r);
  EXPECT_THROW(parse_reduced("3:0"), Error);
  EXPECT_THROW(parse_reduced("3-2"), Error);
  EXPECT_THROW(parse_units("1 x 2"), Error);
}

TEST(Formats, CodebookRoundTripIsExact) {
  Codebook cb{{0.1, -2.5e-7, 3.0, 1.0 / 3.0}, 2};
  auto text = format_codebook(cb);
  EXPECT_EQ(text.substr(0, 4), "2 2\n");
  auto back = parse_codebook(text);
  EXPECT_EQ(back.dim, 2u);
  EXPECT_EQ(back.centroids, cb.centroids);
  EXPECT_THROW(parse_codebook("2 2\n1 2\n"), Error);
}

}  // namespace
}  // namespace unitprosody
