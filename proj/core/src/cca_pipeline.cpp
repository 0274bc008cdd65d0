#include "eccar/cca_pipeline.hpp"

#include <cmath>
#include <string>

namespace eccar {

namespace {

constexpr double kRankTol = 1e-8;        // relative to sigma_1
constexpr double kAbsoluteFloor = 1e-12;  // below this the fit is degenerate
constexpr double kInverseFloor = 1e-10;   // relative eigenvalue floor

struct RankedSvd {
  TruncatedSvd svd;
  Index rank;
  bool reduced;
};

RankedSvd ranked_svd(const Matrix& m, Index r) {
  TruncatedSvd svd = truncated_svd(m, r);
  if (svd.sigma[0] < kAbsoluteFloor)
    throw DegenerateSolution("all singular values below the absolute floor");
  Index rank = r;
  while (rank > 1 && svd.sigma[rank - 1] < kRankTol * svd.sigma[0]) --rank;
  RankedSvd out;
  out.rank = rank;
  out.reduced = rank < r;
  out.svd.u = svd.u.leftCols(rank);
  out.svd.sigma = svd.sigma.head(rank);
  out.svd.v = svd.v.leftCols(rank);
  return out;
}

Matrix spectral_inverse_power(const SpectralFactor& f, double power) {
  const double lambda_max = f.eigenvalues.size() ? f.eigenvalues[0] : 0.0;
  if (f.eigenvalues.size() == 0 || f.basis.rows() != f.basis.cols() ||
      f.eigenvalues.minCoeff() <= kInverseFloor * lambda_max)
    throw SingularCovariance("covariance numerically singular");
  Vector inv = f.eigenvalues.array().pow(power);
  return f.basis * inv.asDiagonal() * f.basis.transpose();
}

Vector fit_mean(const Matrix& m, bool center) {
  return center ? Vector(m.colwise().mean()) : Vector(Vector::Zero(m.cols()));
}

}  // namespace

CcaModel fit_from_covariances(const CovarianceModel& cov, Index r,
                              const PenaltySpec& penalty,
                              const AdmmConfig& config, const Vector& x_mean,
                              const Vector& y_mean,
                              const std::optional<AdmmWarmStart>& warm,
                              AdmmWarmStart* state_out) {
  if (r < 1 || r > std::min(cov.p(), cov.q()))
    throw RankTooLarge("fit: rank " + std::to_string(r) + " out of range");
  auto [est, report] = admm_fit(cov, penalty, config, warm, state_out);

  if (est.b_hat.norm() == 0.0)
    throw DegenerateSolution("fit: penalized solution is identically zero");

  const Matrix sqrt_x = psd_sqrt(cov.eig_x);
  const Matrix sqrt_y = psd_sqrt(cov.eig_y);
  RankedSvd rs = ranked_svd(sqrt_x * est.b_hat * sqrt_y, r);

  CcaModel model;
  model.rank = rs.rank;
  model.effective_rank_reduced = rs.reduced;
  model.lambda = rs.svd.sigma;
  Vector inv_lambda = rs.svd.sigma.cwiseInverse();
  model.u = est.b_hat * sqrt_y * rs.svd.v * inv_lambda.asDiagonal();
  model.v = est.b_hat.transpose() * sqrt_x * rs.svd.u * inv_lambda.asDiagonal();
  model.penalty_used = penalty;
  model.fit = report;
  model.b_hat = std::move(est.b_hat);
  model.x_mean = x_mean;
  model.y_mean = y_mean;
  return model;
}

CcaModel fit(const Dataset& data, Index r, const PenaltySpec& penalty,
             const AdmmConfig& config, bool center) {
  CovarianceModel cov = empirical_covariances(data, center);
  return fit_from_covariances(cov, r, penalty, config,
                              fit_mean(data.x, center),
                              fit_mean(data.y, center));
}

CcaModel fit_low_dim(const Dataset& data, Index r, bool center) {
  if (r < 1 || r > std::min(data.p(), data.q()))
    throw RankTooLarge("fit_low_dim: rank " + std::to_string(r) + " out of range");
  if (data.n() <= data.p() || data.n() <= data.q())
    throw SingularCovariance("fit_low_dim: requires n > p and n > q");
  CovarianceModel cov = empirical_covariances(data, center);

  const Matrix inv_x = spectral_inverse_power(cov.eig_x, -1.0);
  const Matrix inv_y = spectral_inverse_power(cov.eig_y, -1.0);
  Matrix b_hat = inv_x * cov.sigma_xy * inv_y;

  const Matrix sqrt_x = psd_sqrt(cov.eig_x);
  const Matrix sqrt_y = psd_sqrt(cov.eig_y);
  RankedSvd rs = ranked_svd(sqrt_x * b_hat * sqrt_y, r);

  CcaModel model;
  model.rank = rs.rank;
  model.effective_rank_reduced = rs.reduced;
  model.lambda = rs.svd.sigma;
  model.u = spectral_inverse_power(cov.eig_x, -0.5) * rs.svd.u;
  model.v = spectral_inverse_power(cov.eig_y, -0.5) * rs.svd.v;
  model.penalty_used = PenaltySpec{0.0, elementwise_partition(
                                            static_cast<int>(data.p()),
                                            static_cast<int>(data.q()))};
  model.fit.converged = true;
  model.fit.objective = objective(b_hat, cov, model.penalty_used);
  model.b_hat = std::move(b_hat);
  model.x_mean = fit_mean(data.x, center);
  model.y_mean = fit_mean(data.y, center);
  return model;
}

std::pair<Matrix, Matrix> canonical_variates(const CcaModel& model,
                                             const Dataset& data) {
  if (data.p() != model.u.rows() || data.q() != model.v.rows())
    throw InvalidData("canonical_variates: data does not match model dimensions");
  Matrix xc = data.x.rowwise() - model.x_mean.transpose();
  Matrix yc = data.y.rowwise() - model.y_mean.transpose();
  return {xc * model.u, yc * model.v};
}

}  // namespace eccar
