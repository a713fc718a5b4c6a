// unitprosody/unit_codec.hpp

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

#ifndef UNITPROSODY_UNIT_CODEC_HPP_
#define UNITPROSODY_UNIT_CODEC_HPP_

// Discrete unit codebooks (k-means over frame features), nearest-centroid
// quantization, and the run-length "reduced" form of unit sequences.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"
#include "unitprosody/random.hpp"

namespace unitprosody {

using Unit = std::int32_t;

/// Frame-rate feature matrix, row-major `num_frames() x dim`.
struct FrameFeatures {
  std::vector<double> values;
  std::size_t dim = 0;
  double frame_period = 0.020;

  FrameFeatures() = default;
  FrameFeatures(std::vector<double> v, std::size_t d, double period = 0.020)
      : values(std::move(v)), dim(d), frame_period(period) {
    validate();
  }

  std::size_t num_frames() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> frame(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
  void push_back(std::span<const double> f) {
    if (dim == 0 && values.empty()) dim = f.size();
    require(f.size() == dim && dim > 0, Errc::dimension_mismatch,
            "frame dimension mismatch");
    values.insert(values.end(), f.begin(), f.end());
  }
  void validate() const {
    require(dim >= 1, Errc::invalid_argument, "feature dimension must be >= 1");
    require(values.size() % dim == 0, Errc::dimension_mismatch,
            "feature buffer is not a whole number of frames");
    require(frame_period > 0, Errc::invalid_argument, "frame period must be > 0");
  }
};

struct Codebook {
  std::vector<double> centroids;  // row-major K x dim
  std::size_t dim = 0;

  std::size_t size() const { return dim == 0 ? 0 : centroids.size() / dim; }
  std::span<const double> centroid(std::size_t k) const {
    return {centroids.data() + k * dim, dim};
  }
};

struct UnitSequence {
  std::vector<Unit> units;
  double frame_period = 0.020;

  bool operator==(const UnitSequence &) const = default;
};

struct ReducedUnitSequence {
  std::vector<Unit> units;
  std::vector<std::int32_t> durations;

  bool operator==(const ReducedUnitSequence &) const = default;
};

struct KMeansResult {
  Codebook codebook;
  std::vector<double> inertia;  // after each Lloyd iteration
  int iterations = 0;
};

namespace detail {

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Lowest index wins ties.
inline std::size_t nearest(std::span<const double> x, const Codebook &cb,
                           double *dist = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cb.size(); ++k) {
    const double d = squared_distance(x, cb.centroid(k));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

}  // namespace detail

/// Lloyd k-means with k-means++ seeding. Stops when no assignment changes or
/// after `max_iters` iterations. Empty clusters keep their previous centroid,
/// which keeps the recorded inertia non-increasing.
inline KMeansResult kmeans_fit_report(std::span<const FrameFeatures> features,
                                      std::size_t k, int max_iters,
                                      std::uint64_t seed) {
  require(k >= 1, Errc::invalid_argument, "K must be >= 1");
  require(max_iters >= 1, Errc::invalid_argument, "max_iters must be >= 1");
  std::size_t dim = 0;
  std::size_t n = 0;
  for (const auto &f : features) {
    if (f.num_frames() == 0) continue;
    if (dim == 0) dim = f.dim;
    require(f.dim == dim, Errc::dimension_mismatch,
            "all frames must share one dimension");
    n += f.num_frames();
  }
  require(n > 0, Errc::insufficient_data, "insufficient data: no frames");
  require(n >= k, Errc::insufficient_data,
          "insufficient data: " + std::to_string(n) + " frames for K=" +
              std::to_string(k));

  std::vector<double> data;
  data.reserve(n * dim);
  for (const auto &f : features)
    data.insert(data.end(), f.values.begin(), f.values.end());
  auto point = [&](std::size_t i) {
    return std::span<const double>(data.data() + i * dim, dim);
  };

  Rng rng(seed);
  KMeansResult out;
  Codebook &cb = out.codebook;
  cb.dim = dim;
  cb.centroids.reserve(k * dim);

  // k-means++ seeding.
  std::size_t first = rng.index(n);
  cb.centroids.insert(cb.centroids.end(), point(first).begin(), point(first).end());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = detail::squared_distance(point(i), point(first));
  while (cb.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    if (!(total > 0.0))
      fail(Errc::insufficient_data,
           "insufficient data: fewer than K distinct frames");
    double r = rng.uniform() * total;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] <= 0.0) continue;
      pick = i;
      r -= d2[i];
      if (r < 0.0) break;
    }
    cb.centroids.insert(cb.centroids.end(), point(pick).begin(), point(pick).end());
    const auto c = cb.centroid(cb.size() - 1);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], detail::squared_distance(point(i), c));
  }

  std::vector<std::size_t> assign(n, k);
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  for (int it = 0; it < max_iters; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = detail::nearest(point(i), cb);
      if (a != assign[i]) {
        assign[i] = a;
        changed = true;
      }
    }
    if (!changed) break;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = point(i);
      for (std::size_t j = 0; j < dim; ++j) sums[assign[i] * dim + j] += p[j];
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j)
        cb.centroids[c * dim + j] = sums[c * dim + j] / static_cast<double>(counts[c]);
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      inertia += detail::squared_distance(point(i), cb.centroid(assign[i]));
    out.inertia.push_back(inertia);
    out.iterations = it + 1;
  }
  return out;
}

inline Codebook kmeans_fit(std::span<const FrameFeatures> features,
                           std::size_t k, int max_iters, std::uint64_t seed) {
  return kmeans_fit_report(features, k, max_iters, seed).codebook;
}

/// Sum of squared distances from each frame to its nearest centroid.
inline double inertia(std::span<const FrameFeatures> features,
                      const Codebook &cb) {
  double s = 0.0;
  for (const auto &f : features)
    for (std::size_t i = 0; i < f.num_frames(); ++i) {
      double d;
      detail::nearest(f.frame(i), cb, &d);
      s += d;
    }
  return s;
}

inline UnitSequence quantize(const FrameFeatures &features, const Codebook &cb) {
  require(cb.size() >= 1, Errc::invalid_argument, "empty codebook");
  require(features.num_frames() == 0 || features.dim == cb.dim,
          Errc::dimension_mismatch,
          "feature dimension " + std::to_string(features.dim) +
              " does not match codebook dimension " + std::to_string(cb.dim));
  UnitSequence seq;
  seq.frame_period = features.frame_period;
  seq.units.reserve(features.num_frames());
  for (std::size_t i = 0; i < features.num_frames(); ++i)
    seq.units.push_back(static_cast<Unit>(detail::nearest(features.frame(i), cb)));
  return seq;
}

inline ReducedUnitSequence reduce(const UnitSequence &seq) {
  ReducedUnitSequence r;
  for (Unit u : seq.units) {
    if (!r.units.empty() && r.units.back() == u) {
      ++r.durations.back();
    } else {
      r.units.push_back(u);
      r.durations.push_back(1);
    }
  }
  return r;
}

inline UnitSequence expand(const ReducedUnitSequence &r,
                           double frame_period = 0.020) {
  require(r.units.size() == r.durations.size(), Errc::dimension_mismatch,
          "units and durations differ in length");
  std::size_t total = 0;
  for (auto d : r.durations) {
    if (d < 1) fail(Errc::invalid_duration, "invalid duration " + std::to_string(d));
    total += static_cast<std::size_t>(d);
  }
  UnitSequence s;
  s.frame_period = frame_period;
  s.units.reserve(total);
  for (std::size_t i = 0; i < r.units.size(); ++i)
    s.units.insert(s.units.end(), static_cast<std::size_t>(r.durations[i]), r.units[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Text formats. Unit files: one utterance per line, space-separated integers.
// Reduced files: "unit:duration" tokens. Codebooks: "K D" header then K rows.

inline std::string format_units(const UnitSequence &s) {
  std::string line;
  for (std::size_t i = 0; i < s.units.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(s.units[i]);
  }
  return line;
}

inline UnitSequence parse_units(const std::string &line) {
  UnitSequence s;
  for (const auto &tok : io::split_ws(line)) {
    long long v = io::parse_int(tok, "unit file");
    require(v >= 0 && v <= std::numeric_limits<Unit>::max(), Errc::parse,
            "unit out of range: " + tok);
    s.units.push_back(static_cast<Unit>(v));
  }
  return s;
}

inline std::string format_reduced(const ReducedUnitSequence &r) {
  std::string line;
  for (std::size_t i = 0; i < r.units.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(r.units[i]) + ':' + std::to_string(r.durations[i]);
  }
  return line;
}

inline ReducedUnitSequence parse_reduced(const std::string &line) {
  ReducedUnitSequence r;
  for (const auto &tok : io::split_ws(line)) {
    auto colon = tok.find(':');
    require(colon != std::string::npos, Errc::parse,
            "reduced token lacks ':' : " + tok);
    long long u = io::parse_int(tok.substr(0, colon), "reduced file");
    long long d = io::parse_int(tok.substr(colon + 1), "reduced file");
    require(u >= 0, Errc::parse, "negative unit: " + tok);
    if (d < 1) fail(Errc::invalid_duration, "invalid duration in token " + tok);
    r.units.push_back(static_cast<Unit>(u));
    r.durations.push_back(static_cast<std::int32_t>(d));
  }
  return r;
}

inline std::string format_codebook(const Codebook &cb) {
  std::string out = std::to_string(cb.size()) + ' ' + std::to_string(cb.dim) + '\n';
  for (std::size_t k = 0; k < cb.size(); ++k) {
    const auto c = cb.centroid(k);
    for (std::size_t j = 0; j < cb.dim; ++j) {
      if (j) out += ' ';
      out += io::format_real(c[j]);
    }
    out += '\n';
  }
  return out;
}

// Shared by codebooks and feature files: "N D" header, N rows of D reals.
inline std::vector<double> parse_matrix_text(const std::string &text,
                                             std::size_t &rows,
                                             std::size_t &cols,
                                             const std::string &what) {
  auto lines = io::split_lines(text);
  require(!lines.empty(), Errc::parse, what + ": empty file");
  auto head = io::split_ws(lines[0]);
  require(head.size() == 2, Errc::parse, what + ": header must be 'rows cols'");
  long long r = io::parse_int(head[0], what);
  long long c = io::parse_int(head[1], what);
  require(r >= 0 && c >= 1, Errc::parse, what + ": bad header");
  rows = static_cast<std::size_t>(r);
  cols = static_cast<std::size_t>(c);
  std::vector<double> values;
  values.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(i + 1 < lines.size(), Errc::parse, what + ": missing rows");
    auto toks = io::split_ws(lines[i + 1]);
    require(toks.size() == cols, Errc::parse,
            what + ": line " + std::to_string(i + 2) + " has wrong column count");
    for (const auto &t : toks) values.push_back(io::parse_real(t, what));
  }
  return values;
}

inline Codebook parse_codebook(const std::string &text) {
  std::size_t rows = 0, cols = 0;
  Codebook cb;
  cb.centroids = parse_matrix_text(text, rows, cols, "codebook");
  cb.dim = cols;
  require(rows >= 1, Errc::parse, "codebook: K must be >= 1");
  return cb;
}

inline std::string format_features(const FrameFeatures &f) {
  Codebook as_matrix{f.values, f.dim};
  return format_codebook(as_matrix);
}

inline FrameFeatures parse_features(const std::string &text,
                                    double frame_period = 0.020) {
  std::size_t rows = 0, cols = 0;
  auto v = parse_matrix_text(text, rows, cols, "feature file");
  return FrameFeatures(std::move(v), cols, frame_period);
}

}  // namespace unitprosody

#endif  // UNITPROSODY_UNIT_CODEC_HPP_
