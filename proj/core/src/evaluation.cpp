#include "eccar/evaluation.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace eccar {

namespace {

Matrix orthonormal_basis(const Matrix& a) {
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < a.cols())
    throw RankDeficient("sin_theta_distance: input not full column rank");
  Matrix q = Matrix(qr.householderQ()).leftCols(a.cols());
  return q;
}

}  // namespace

double sin_theta_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidDimensions("sin_theta_distance: shape mismatch");
  Matrix qa = orthonormal_basis(a);
  Matrix qb = orthonormal_basis(b);
  // ||(I - Qa Qa^T) Qb||_F equals ||sin Theta||_F and avoids the cancellation
  // of sqrt(1 - sigma^2) near aligned subspaces.
  return (qb - qa * (qa.transpose() * qb)).norm();
}

double procrustes_distance(const Matrix& a_hat, const Matrix& a) {
  if (a_hat.rows() != a.rows() || a_hat.cols() != a.cols())
    throw InvalidDimensions("procrustes_distance: shape mismatch");
  Eigen::BDCSVD<Matrix> svd(a.transpose() * a_hat,
                            Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix o = svd.matrixU() * svd.matrixV().transpose();
  return (a_hat - a * o).norm();
}

double prediction_mse(const Matrix& u, const Matrix& v, const Dataset& data) {
  if (u.cols() != v.cols() || u.cols() < 1)
    throw InvalidModel("prediction_mse: direction matrices need matching rank >= 1");
  if (data.p() != u.rows() || data.q() != v.rows())
    throw InvalidData("prediction_mse: data does not match directions");
  if (u.norm() == 0.0 && v.norm() == 0.0)
    return std::numeric_limits<double>::infinity();
  const double r = static_cast<double>(u.cols());
  const double n = static_cast<double>(data.n());
  return (data.x * u - data.y * v).squaredNorm() / (n * r);
}

VariateCorrelation variate_correlation(const Matrix& u, const Matrix& v,
                                       const Dataset& data) {
  if (u.cols() != v.cols())
    throw InvalidModel("variate_correlation: rank mismatch");
  if (data.p() != u.rows() || data.q() != v.rows())
    throw InvalidData("variate_correlation: data does not match directions");
  const Index r = u.cols();
  Matrix xu = data.x * u;
  Matrix yv = data.y * v;
  VariateCorrelation out;
  out.corr.resize(r);
  out.degenerate.assign(r, false);
  for (Index j = 0; j < r; ++j) {
    Vector a = xu.col(j).array() - xu.col(j).mean();
    Vector b = yv.col(j).array() - yv.col(j).mean();
    const double denom = a.norm() * b.norm();
    if (denom == 0.0) {
      out.corr[j] = 0.0;
      out.degenerate[j] = true;
    } else {
      out.corr[j] = std::clamp(a.dot(b) / denom, -1.0, 1.0);
    }
  }
  return out;
}

SupportMetrics support_metrics(const CoefficientEstimate& b_hat,
                               const GroundTruth& truth) {
  if (b_hat.b_hat.rows() != truth.p() || b_hat.b_hat.cols() != truth.q())
    throw InvalidData("support_metrics: shape mismatch");
  std::vector<char> in_su(truth.p(), 0), in_sv(truth.q(), 0);
  for (int i : truth.support_u) in_su[i] = 1;
  for (int j : truth.support_v) in_sv[j] = 1;

  long tp = 0, fp = 0, fn = 0;
  for (Index i = 0; i < b_hat.b_hat.rows(); ++i)
    for (Index j = 0; j < b_hat.b_hat.cols(); ++j) {
      const bool predicted = std::abs(b_hat.b_hat(i, j)) > b_hat.numeric_zero_tol;
      const bool actual = in_su[i] && in_sv[j];
      if (predicted && actual) ++tp;
      else if (predicted && !actual) ++fp;
      else if (!predicted && actual) ++fn;
    }

  SupportMetrics m;
  m.empty_prediction = (tp + fp) == 0;
  m.precision = m.empty_prediction ? 1.0 : static_cast<double>(tp) / (tp + fp);
  m.recall = (tp + fn) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  m.exact_subset = fp == 0;
  return m;
}

}  // namespace eccar
