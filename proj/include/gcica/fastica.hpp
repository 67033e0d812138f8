#pragma once

#include <Eigen/Dense>

#include "gcica/model.hpp"

namespace gcica {

struct FastIcaOptions {
  int max_iters = 200;
  double tol = 1e-6;  // on 1 - |<w_new, w_old>|, worst component
  /// Covariance eigenvalues below this fraction of the largest count as rank loss.
  double rank_tol = 1e-10;
};

struct FastIcaResult {
  Eigen::MatrixXd sources;  // one separated unit-variance sequence per row
  Eigen::MatrixXd whitened;  // whitened inputs, for diagnostics
  int iterations = 0;
  bool converged = false;
  bool rank_deficient = false;
};

/// Symmetric fixed-point ICA with the cubic (kurtosis) contrast.
///
/// Rows of `x` are mixtures. They are centred and whitened through the
/// eigendecomposition of the sample covariance, then W is refined by
///   W <- E[(W z)^3 z^T] - 3 W,   W <- (W W^T)^{-1/2} W
/// until every row direction moves by less than `tol`. A single input row is
/// returned centred and normalized.
FastIcaResult fast_ica(const Eigen::MatrixXd& x, Rng& rng, const FastIcaOptions& opts = {});

/// (A A^T)^{-1/2} A.
Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& a);

}  // namespace gcica
