// unitprosody/slda.hpp

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

#ifndef UNITPROSODY_SLDA_HPP_
#define UNITPROSODY_SLDA_HPP_

// Forward stepwise linear discriminant analysis with Wilks' lambda.
//
// For a variable set S, lambda(S) = det(W_S) / det(T_S) where W and T are
// the pooled within-class and total scatter matrices. Each step adds the
// variable giving the smallest lambda, provided the partial F test of that
// addition has p <= alpha.

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "unitprosody/error.hpp"
#include "unitprosody/stats.hpp"

namespace unitprosody {

struct SldaStep {
  std::size_t feature = 0;
  double wilks_lambda = 1.0;  // lambda of the selected set including `feature`
  double f_stat = 0.0;        // partial F for adding `feature`
  double p_value = 1.0;
  double df1 = 0.0, df2 = 0.0;
};

struct SldaResult {
  std::vector<std::size_t> selected;
  std::vector<SldaStep> steps;
  // Best remaining candidate at the step where selection stopped, if any.
  std::optional<SldaStep> rejected;
};

struct ScatterMatrices {
  Eigen::MatrixXd within;
  Eigen::MatrixXd total;
  std::size_t num_classes = 0;
};

inline ScatterMatrices scatter_matrices(const Eigen::MatrixXd &x, std::span<const int> labels) {
  require(static_cast<std::size_t>(x.rows()) == labels.size(), Errc::dimension_mismatch,
          "one label per row is required");
  std::map<int, std::vector<Eigen::Index>> classes;
  for (std::size_t i = 0; i < labels.size(); ++i) classes[labels[i]].push_back(static_cast<Eigen::Index>(i));
  const Eigen::RowVectorXd grand = x.colwise().mean();
  ScatterMatrices s;
  s.num_classes = classes.size();
  const Eigen::MatrixXd centered = x.rowwise() - grand;
  s.total = centered.transpose() * centered;
  s.within = Eigen::MatrixXd::Zero(x.cols(), x.cols());
  for (const auto &[label, rows] : classes) {
    Eigen::MatrixXd g(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) g.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
    const Eigen::RowVectorXd m = g.colwise().mean();
    const Eigen::MatrixXd gc = g.rowwise() - m;
    s.within += gc.transpose() * gc;
  }
  return s;
}

namespace detail {

// log det of a symmetric positive definite matrix plus `ridge` on the
// diagonal; nullopt when Cholesky fails.
inline std::optional<double> log_det_spd(const Eigen::MatrixXd &m, double ridge = 0.0) {
  Eigen::LLT<Eigen::MatrixXd> llt(m + ridge * Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto &l = llt.matrixLLT();
  double s = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += 2.0 * std::log(l(i, i));
  return s;
}

inline Eigen::MatrixXd sub(const Eigen::MatrixXd &m, const std::vector<std::size_t> &idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
  return out;
}

}  // namespace detail

inline double wilks_lambda(const ScatterMatrices &s, const std::vector<std::size_t> &subset) {
  if (subset.empty()) return 1.0;
  const auto w = detail::sub(s.within, subset);
  const auto t = detail::sub(s.total, subset);
  auto lw = detail::log_det_spd(w);
  auto lt = detail::log_det_spd(t);
  if (!lw || !lt) {
    // One shared ridge so a collinear direction cancels in the ratio.
    const double ridge = 1e-10 * std::max(1.0, t.diagonal().mean());
    lw = detail::log_det_spd(w, ridge);
    lt = detail::log_det_spd(t, ridge);
    if (!lw || !lt) fail(Errc::degenerate, "degenerate design: singular scatter matrix");
  }
  return std::min(1.0, std::exp(*lw - *lt));
}

inline SldaResult forward_slda(const Eigen::MatrixXd &x, std::span<const int> labels, double alpha = 0.01) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto p = static_cast<std::size_t>(x.cols());
  require(p >= 1, Errc::invalid_argument, "SLDA needs at least one feature");
  require(alpha > 0.0 && alpha <= 1.0, Errc::invalid_argument, "alpha must lie in (0, 1]");
  const auto s = scatter_matrices(x, labels);
  const std::size_t g = s.num_classes;
  require(g >= 2, Errc::invalid_argument, "SLDA needs at least 2 classes");
  require(n > g, Errc::invalid_argument, "SLDA needs more samples than classes");

  SldaResult res;
  std::vector<bool> used(p, false);
  double lambda_prev = 1.0;
  while (res.selected.size() < p) {
    const std::size_t q = res.selected.size();
    const double df1 = static_cast<double>(g - 1);
    const double df2 = static_cast<double>(n) - static_cast<double>(g) - static_cast<double>(q);
    if (df2 <= 0.0) break;
    std::optional<SldaStep> best;
    for (std::size_t j = 0; j < p; ++j) {
      if (used[j]) continue;
      auto trial = res.selected;
      trial.push_back(j);
      const double lam = wilks_lambda(s, trial);
      if (!best || lam < best->wilks_lambda) {
        best = SldaStep{j, lam, 0.0, 1.0, df1, df2};
      }
    }
    if (!best) break;
    const double partial = lambda_prev > 0.0 ? best->wilks_lambda / lambda_prev : 1.0;
    if (partial >= 1.0) {
      best->f_stat = 0.0;
      best->p_value = 1.0;
    } else if (partial <= 0.0) {
      best->f_stat = std::numeric_limits<double>::infinity();
      best->p_value = 0.0;
    } else {
      best->f_stat = (df2 / df1) * (1.0 - partial) / partial;
      best->p_value = stats::f_upper_tail(best->f_stat, df1, df2);
    }
    if (best->p_value > alpha) {
      res.rejected = best;
      break;
    }
    used[best->feature] = true;
    res.selected.push_back(best->feature);
    res.steps.push_back(*best);
    lambda_prev = best->wilks_lambda;
  }
  return res;
}

}  // namespace unitprosody

#endif  // UNITPROSODY_SLDA_HPP_
