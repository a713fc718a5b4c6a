// unitprosody/stats.hpp

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

#ifndef UNITPROSODY_STATS_HPP_
#define UNITPROSODY_STATS_HPP_

// Classical tests used by the expressivity analysis: one-way ANOVA with
// pairwise follow-ups, Pearson correlation, and the F / t tail
// probabilities behind them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "unitprosody/error.hpp"

namespace unitprosody::stats {

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16, kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  require(a > 0 && b > 0, Errc::invalid_argument, "incomplete beta needs a, b > 0");
  require(x >= 0.0 && x <= 1.0, Errc::invalid_argument, "incomplete beta needs x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
  return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

/// P(F > f) for an F(df1, df2) variable.
inline double f_upper_tail(double f, double df1, double df2) {
  require(df1 > 0 && df2 > 0, Errc::invalid_argument, "F distribution needs positive df");
  if (!(f > 0.0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  return std::clamp(incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f)), 0.0, 1.0);
}

/// Two-sided P(|T| > |t|) for Student's t with `df` degrees of freedom.
inline double t_two_sided(double t, double df) {
  require(df > 0, Errc::invalid_argument, "t distribution needs positive df");
  if (std::isinf(t)) return 0.0;
  return std::clamp(incomplete_beta(df / 2.0, 0.5, df / (df + t * t)), 0.0, 1.0);
}

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  double df_between = 0.0;
  double df_within = 0.0;
  double ms_within = 0.0;
};

inline double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline AnovaResult anova_oneway(std::span<const std::vector<double>> groups) {
  require(groups.size() >= 2, Errc::invalid_argument, "ANOVA needs at least 2 groups");
  std::size_t n = 0;
  double grand = 0.0;
  for (const auto &g : groups) {
    require(g.size() >= 2, Errc::invalid_argument, "ANOVA needs at least 2 samples per group");
    for (double x : g) {
      require(std::isfinite(x), Errc::invalid_argument, "ANOVA sample is not finite");
      grand += x;
    }
    n += g.size();
  }
  grand /= static_cast<double>(n);
  double ssb = 0.0, ssw = 0.0;
  for (const auto &g : groups) {
    const double m = mean_of(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) ssw += (x - m) * (x - m);
  }
  AnovaResult r;
  r.df_between = static_cast<double>(groups.size() - 1);
  r.df_within = static_cast<double>(n - groups.size());
  const double scale = std::max(ssb + ssw, std::numeric_limits<double>::min());
  const bool no_within = ssw <= 1e-14 * scale;
  const bool no_between = ssb <= 1e-14 * scale;
  if (no_within && !no_between)
    fail(Errc::degenerate, "degenerate groups: zero within-group variance with unequal means");
  r.ms_within = ssw / r.df_within;
  if (no_between) return r;  // F = 0, p = 1
  r.f = (ssb / r.df_between) / r.ms_within;
  r.p = f_upper_tail(r.f, r.df_between, r.df_within);
  return r;
}

struct PairwiseComparison {
  std::size_t a = 0, b = 0;
  double mean_diff = 0.0;  // mean(a) - mean(b)
  double t = 0.0;
  double p = 1.0;             // unadjusted two-sided
  double p_bonferroni = 1.0;  // p times the number of pairs, capped at 1
};

/// Pairwise t tests on the pooled ANOVA error term (Fisher's LSD), with a
/// Bonferroni-adjusted p alongside.
inline std::vector<PairwiseComparison> pairwise_comparisons(std::span<const std::vector<double>> groups) {
  const auto anova = anova_oneway(groups);
  const std::size_t k = groups.size();
  const double pairs = static_cast<double>(k * (k - 1) / 2);
  std::vector<PairwiseComparison> out;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      PairwiseComparison c;
      c.a = i;
      c.b = j;
      c.mean_diff = mean_of(groups[i]) - mean_of(groups[j]);
      const double se = std::sqrt(anova.ms_within * (1.0 / groups[i].size() + 1.0 / groups[j].size()));
      if (se > 0.0) {
        c.t = c.mean_diff / se;
        c.p = t_two_sided(c.t, anova.df_within);
      } else {
        c.p = c.mean_diff == 0.0 ? 1.0 : 0.0;
      }
      c.p_bonferroni = std::min(1.0, c.p * pairs);
      out.push_back(c);
    }
  return out;
}

struct PearsonResult {
  double rho = 0.0;
  double p = 1.0;
};

inline PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), Errc::dimension_mismatch, "pearson needs equal lengths");
  require(x.size() >= 3, Errc::invalid_argument, "pearson needs at least 3 pairs");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double a) { return a == v[0]; });
  };
  if (constant(x) || constant(y)) fail(Errc::degenerate, "zero variance input to pearson");
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) fail(Errc::degenerate, "zero variance input to pearson");
  PearsonResult r;
  r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(x.size() - 2);
  if (std::abs(r.rho) >= 1.0) {
    r.p = 0.0;
  } else {
    const double t = r.rho * std::sqrt(df / (1.0 - r.rho * r.rho));
    r.p = t_two_sided(t, df);
  }
  return r;
}

}  // namespace unitprosody::stats

#endif  // UNITPROSODY_STATS_HPP_
