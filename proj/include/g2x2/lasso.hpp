// Copyright 2026 The g2x2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef G2X2_LASSO_HPP_
#define G2X2_LASSO_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "g2x2/error.hpp"

namespace g2x2 {

struct LassoOptions {
  double tol = 1e-9;
  int max_sweeps = 100'000;
};

struct LassoResult {
  Eigen::VectorXd beta;
  double intercept = 0.0;
  double r2 = 0.0;
  int sweeps = 0;
};

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

namespace detail {

inline double r_squared(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, const Eigen::VectorXd& beta, double intercept) {
  const Eigen::VectorXd resid = y - (Z * beta).array().matrix() - Eigen::VectorXd::Constant(y.size(), intercept);
  const double ss_tot = (y.array() - y.mean()).square().sum();
  return ss_tot > 0 ? 1.0 - resid.squaredNorm() / ss_tot : 0.0;
}

}  // namespace detail

// Minimizes (1/2n) ||y - intercept - Z beta||^2 + lambda ||beta||_1 by
// cyclic coordinate descent on centered data; the intercept is
// unpenalized.
inline LassoResult lasso_fit(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, double lambda,
                             const LassoOptions& opt = {}) {
  if (Z.rows() != y.size()) throw Error(ErrorKind::kInvalidArgument, "design and target sizes differ");
  if (Z.rows() < 1) throw Error(ErrorKind::kEmptyDataset, "lasso needs data");
  if (!(lambda >= 0)) throw Error(ErrorKind::kInvalidArgument, "lambda must be non-negative");
  const double n = static_cast<double>(Z.rows());
  const Eigen::RowVectorXd zmean = Z.colwise().mean();
  const Eigen::MatrixXd Zc = Z.rowwise() - zmean;
  const double ymean = y.mean();
  Eigen::VectorXd resid = y.array() - ymean;
  const Eigen::VectorXd sq = Zc.colwise().squaredNorm().transpose() / n;

  LassoResult res;
  res.beta = Eigen::VectorXd::Zero(Z.cols());
  bool converged = Z.cols() == 0;
  for (res.sweeps = 0; res.sweeps < opt.max_sweeps && !converged; ++res.sweeps) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
      if (sq[j] <= 0.0) continue;
      const double old = res.beta[j];
      const double rho = Zc.col(j).dot(resid) / n + sq[j] * old;
      const double updated = soft_threshold(rho, lambda) / sq[j];
      if (updated != old) {
        resid -= (updated - old) * Zc.col(j);
        res.beta[j] = updated;
        max_change = std::max(max_change, std::fabs(updated - old));
      }
    }
    converged = max_change < opt.tol;
  }
  if (!converged) throw Error(ErrorKind::kNoConvergence, "coordinate descent did not converge");
  res.intercept = ymean - zmean.dot(res.beta);
  res.r2 = detail::r_squared(Z, y, res.beta, res.intercept);
  return res;
}

// Largest violation of the subgradient optimality conditions:
// |Z_j' r| / n <= lambda for zero coefficients and Z_j' r / n =
// lambda sign(beta_j) otherwise, with r the residual.
inline double lasso_kkt_violation(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, const LassoResult& fit,
                                  double lambda) {
  const double n = static_cast<double>(Z.rows());
  const Eigen::VectorXd resid = y - Z * fit.beta - Eigen::VectorXd::Constant(y.size(), fit.intercept);
  double worst = std::fabs(resid.sum() / n);
  for (Eigen::Index j = 0; j < Z.cols(); ++j) {
    const double g = Z.col(j).dot(resid) / n;
    if (fit.beta[j] == 0.0) {
      worst = std::max(worst, std::max(0.0, std::fabs(g) - lambda));
    } else {
      worst = std::max(worst, std::fabs(g - lambda * (fit.beta[j] > 0 ? 1.0 : -1.0)));
    }
  }
  return worst;
}

// Least squares with intercept via column-pivoted QR.
inline LassoResult ols_fit(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y) {
  Eigen::MatrixXd A(Z.rows(), Z.cols() + 1);
  A << Eigen::VectorXd::Ones(Z.rows()), Z;
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  LassoResult res;
  res.intercept = coef[0];
  res.beta = coef.tail(Z.cols());
  res.r2 = detail::r_squared(Z, y, res.beta, res.intercept);
  return res;
}

}  // namespace g2x2

#endif  // G2X2_LASSO_HPP_
