#include "gcica/fastica.hpp"

#include <cmath>

#include "gcica/errors.hpp"

namespace gcica {

Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& a) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a * a.transpose());
  const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose() * a;
}

FastIcaResult fast_ica(const Eigen::MatrixXd& x, Rng& rng, const FastIcaOptions& opts) {
  if (x.rows() < 1 || x.cols() < 2) throw UsageError("fast_ica: need >= 1 row and >= 2 samples");
  const Eigen::Index n = x.rows();
  const double samples = static_cast<double>(x.cols());

  FastIcaResult out;
  const Eigen::MatrixXd centred = x.colwise() - x.rowwise().mean();
  const Eigen::MatrixXd cov = centred * centred.transpose() / samples;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
  if (!(lambda(n - 1) > 0.0) || lambda(0) <= opts.rank_tol * lambda(n - 1)) {
    out.rank_deficient = true;
    return out;
  }
  const Eigen::MatrixXd whitening =
      lambda.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  out.whitened = whitening * centred;
  const Eigen::MatrixXd& z = out.whitened;

  if (n == 1) {
    out.sources = z;
    out.converged = true;
    return out;
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) w(i, j) = normal(rng);
  w = symmetric_decorrelation(w);

  Eigen::MatrixXd y(n, z.cols());
  for (out.iterations = 1; out.iterations <= opts.max_iters; ++out.iterations) {
    y.noalias() = w * z;
    y = y.array().cube().matrix();
    Eigen::MatrixXd next = y * z.transpose() / samples - 3.0 * w;
    next = symmetric_decorrelation(next);
    const double change = ((next * w.transpose()).diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff();
    w = std::move(next);
    if (change < opts.tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) out.iterations = opts.max_iters;
  out.sources = w * z;
  return out;
}

}  // namespace gcica
