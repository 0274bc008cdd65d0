#include "eccar/matrix_kernels.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

namespace eccar {

namespace {

// Clamp roundoff negatives; reject genuinely indefinite input.
void clamp_eigenvalues(Vector& ev) {
  const double lambda_max = ev.size() ? std::max(ev.maxCoeff(), 0.0) : 0.0;
  const double tol = 1e-10 * lambda_max;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol)
      throw InvalidData("matrix is not PSD: eigenvalue " + std::to_string(ev[i]));
    if (ev[i] < 0) ev[i] = 0.0;
  }
}

Matrix center_columns(const Matrix& m) {
  return m.rowwise() - m.colwise().mean();
}

}  // namespace

SpectralFactor psd_eigendecomposition(const Matrix& s) {
  Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed");
  const Index d = sym.rows();
  SpectralFactor f;
  f.dim = d;
  f.basis.resize(d, d);
  f.eigenvalues.resize(d);
  // Eigen returns ascending order; flip to descending.
  for (Index i = 0; i < d; ++i) {
    f.eigenvalues[i] = es.eigenvalues()[d - 1 - i];
    f.basis.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  clamp_eigenvalues(f.eigenvalues);
  return f;
}

SpectralFactor gram_eigendecomposition(const Matrix& data_block) {
  const Index n = data_block.rows();
  const Index d = data_block.cols();
  Matrix scaled = data_block / std::sqrt(static_cast<double>(n));
  Eigen::BDCSVD<Matrix> svd(scaled, Eigen::ComputeThinV);
  const Index k = std::min(n, d);
  SpectralFactor f;
  f.dim = d;
  f.basis = svd.matrixV().leftCols(k);
  f.eigenvalues = svd.singularValues().head(k).array().square();
  clamp_eigenvalues(f.eigenvalues);
  return f;
}

CovarianceModel empirical_covariances(const Dataset& data, bool center) {
  data.validate();
  const double n = static_cast<double>(data.n());
  Matrix xc = center ? center_columns(data.x) : data.x;
  Matrix yc = center ? center_columns(data.y) : data.y;

  CovarianceModel cov;
  cov.n_samples = data.n();
  cov.sigma_x = (xc.transpose() * xc) / n;
  cov.sigma_x = 0.5 * (cov.sigma_x + cov.sigma_x.transpose()).eval();
  cov.sigma_y = (yc.transpose() * yc) / n;
  cov.sigma_y = 0.5 * (cov.sigma_y + cov.sigma_y.transpose()).eval();
  cov.sigma_xy = (xc.transpose() * yc) / n;

  cov.eig_x = data.n() < data.p() ? gram_eigendecomposition(xc)
                                  : psd_eigendecomposition(cov.sigma_x);
  cov.eig_y = data.n() < data.q() ? gram_eigendecomposition(yc)
                                  : psd_eigendecomposition(cov.sigma_y);
  return cov;
}

Matrix psd_sqrt(const SpectralFactor& f) {
  return f.basis * f.eigenvalues.cwiseSqrt().asDiagonal() * f.basis.transpose();
}

Matrix soft_threshold(const Matrix& m, double kappa) {
  if (kappa < 0) throw InvalidConfig("soft_threshold: negative kappa");
  return m.array().sign() * (m.array().abs() - kappa).max(0.0);
}

Matrix group_threshold(const Matrix& m, double kappa,
                       const GroupPartition& partition) {
  if (kappa < 0) throw InvalidConfig("group_threshold: negative kappa");
  if (partition.p != m.rows() || partition.q != m.cols())
    throw InvalidPartition("group_threshold: partition does not match matrix");
  if (partition.all_singletons()) return soft_threshold(m, kappa);

  Matrix out = m;
  for (const auto& grp : partition.groups) {
    double sq = 0.0;
    for (const auto& [i, j] : grp) sq += m(i, j) * m(i, j);
    const double norm = std::sqrt(sq);
    const double thresh = std::sqrt(static_cast<double>(grp.size())) * kappa;
    double factor = 0.0;
    if (norm > 0.0) factor = std::max(0.0, 1.0 - thresh / norm);
    for (const auto& [i, j] : grp) out(i, j) = factor * m(i, j);
  }
  return out;
}

TruncatedSvd truncated_svd(const Matrix& m, Index r) {
  if (r < 1 || r > std::min(m.rows(), m.cols()))
    throw RankTooLarge("truncated_svd: rank " + std::to_string(r) +
                       " exceeds min dimension " +
                       std::to_string(std::min(m.rows(), m.cols())));
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  TruncatedSvd out;
  out.u = svd.matrixU().leftCols(r);
  out.sigma = svd.singularValues().head(r);
  out.v = svd.matrixV().leftCols(r);
  // Sign convention: largest-magnitude entry of each left vector nonnegative.
  for (Index k = 0; k < r; ++k) {
    Index imax = 0;
    out.u.col(k).cwiseAbs().maxCoeff(&imax);
    if (out.u(imax, k) < 0) {
      out.u.col(k) = -out.u.col(k);
      out.v.col(k) = -out.v.col(k);
    }
  }
  return out;
}

}  // namespace eccar
