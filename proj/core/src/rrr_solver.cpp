#include "eccar/rrr_solver.hpp"

#include <cmath>
#include <string>

namespace eccar {

namespace {

double penalty_norm(const Matrix& b, const GroupPartition& partition) {
  if (partition.all_singletons()) return b.cwiseAbs().sum();
  double total = 0.0;
  for (const auto& grp : partition.groups) {
    double sq = 0.0;
    for (const auto& [i, j] : grp) sq += b(i, j) * b(i, j);
    total += std::sqrt(static_cast<double>(grp.size())) * std::sqrt(sq);
  }
  return total;
}

}  // namespace

double theoretical_penalty(Index n, Index p, Index q, double a) {
  if (n < 1) throw InvalidDimensions("theoretical_penalty: n must be positive");
  if (p + q < 2) throw InvalidDimensions("theoretical_penalty: p+q must be >= 2");
  if (a < 0) throw InvalidConfig("theoretical_penalty: negative scale");
  return a * std::sqrt(std::log(static_cast<double>(p + q)) /
                       static_cast<double>(n));
}

Matrix b_update(const CovarianceModel& cov, const Matrix& z, const Matrix& h,
                double step) {
  if (step <= 0) throw InvalidConfig("b_update: step must be positive");
  if (z.rows() != cov.p() || z.cols() != cov.q() || h.rows() != cov.p() ||
      h.cols() != cov.q())
    throw InvalidDimensions("b_update: Z/H shape does not match covariances");

  const Matrix rhs = cov.sigma_xy + step * (z - h);
  // Solve in the eigenbases; works for thin (Gram-trick) factors too, where
  // directions with zero eigenvalue reduce to rhs/step.
  const Matrix c = cov.eig_x.basis.transpose() * rhs * cov.eig_y.basis;
  const Vector& l1 = cov.eig_x.eigenvalues;
  const Vector& l2 = cov.eig_y.eigenvalues;
  Matrix d(c.rows(), c.cols());
  for (Index i = 0; i < c.rows(); ++i)
    for (Index j = 0; j < c.cols(); ++j) {
      const double ll = l1[i] * l2[j];
      d(i, j) = -c(i, j) * ll / (step * (ll + step));
    }
  return rhs / step + cov.eig_x.basis * d * cov.eig_y.basis.transpose();
}

double objective(const Matrix& b, const CovarianceModel& cov,
                 const PenaltySpec& penalty) {
  const double quad =
      0.5 * ((cov.sigma_x * b).cwiseProduct(b * cov.sigma_y)).sum();
  const double cross = (b.cwiseProduct(cov.sigma_xy)).sum();
  const double constant = 0.5 * static_cast<double>(cov.n_samples);
  return quad - cross + constant +
         penalty.weight * penalty_norm(b, penalty.partition);
}

std::pair<CoefficientEstimate, FitReport> admm_fit(
    const CovarianceModel& cov, const PenaltySpec& penalty,
    const AdmmConfig& config, const std::optional<AdmmWarmStart>& warm,
    AdmmWarmStart* state_out) {
  if (config.step <= 0 || config.max_iter < 1 || config.eps_abs < 0 ||
      config.eps_rel < 0)
    throw InvalidConfig("admm_fit: invalid solver configuration");
  if (penalty.weight < 0) throw InvalidConfig("admm_fit: negative weight");
  if (penalty.partition.p != cov.p() || penalty.partition.q != cov.q())
    throw InvalidPartition("admm_fit: partition does not match covariances");

  const Index p = cov.p();
  const Index q = cov.q();
  const double root_pq = std::sqrt(static_cast<double>(p) * q);
  const double kappa = penalty.weight / config.step;

  Matrix z = warm ? warm->z : Matrix::Zero(p, q);
  Matrix h = warm ? warm->h : Matrix::Zero(p, q);
  Matrix b;

  FitReport report;
  for (int it = 0; it < config.max_iter; ++it) {
    b = b_update(cov, z, h, config.step);
    const Matrix z_prev = std::move(z);
    z = group_threshold(b + h, kappa, penalty.partition);
    h += b - z;

    const double primal = (b - z).norm();
    const double dual = config.step * (z - z_prev).norm();
    if (!z.allFinite() || !h.allFinite())
      throw NumericalFailure("admm_fit: non-finite iterate at iteration " +
                             std::to_string(it));
    report.iterations = it + 1;
    report.primal_residual = primal;
    report.dual_residual = dual;
    const double eps_pri = config.eps_abs * root_pq +
                           config.eps_rel * std::max(b.norm(), z.norm());
    const double eps_dual =
        config.eps_abs * root_pq + config.eps_rel * config.step * h.norm();
    if (primal <= eps_pri && dual <= eps_dual) {
      report.converged = true;
      break;
    }
  }

  if (state_out) {
    state_out->z = z;
    state_out->h = h;
  }
  CoefficientEstimate est;
  est.b_hat = z;  // Z is the exactly-sparse iterate
  report.objective = objective(est.b_hat, cov, penalty);
  report.kkt_violation = kkt_violation(est, cov, penalty);
  return {std::move(est), report};
}

double kkt_violation(const CoefficientEstimate& b, const CovarianceModel& cov,
                     const PenaltySpec& penalty) {
  const Matrix g = cov.sigma_x * b.b_hat * cov.sigma_y - cov.sigma_xy;
  const double w = penalty.weight;
  double worst = 0.0;
  if (penalty.partition.all_singletons()) {
    for (Index i = 0; i < g.rows(); ++i)
      for (Index j = 0; j < g.cols(); ++j) {
        const double bij = b.b_hat(i, j);
        const double viol = bij == 0.0
                                ? std::max(std::abs(g(i, j)) - w, 0.0)
                                : std::abs(g(i, j) + w * (bij > 0 ? 1.0 : -1.0));
        worst = std::max(worst, viol);
      }
    return worst;
  }
  for (const auto& grp : penalty.partition.groups) {
    const double wg = w * std::sqrt(static_cast<double>(grp.size()));
    double bsq = 0.0, gsq = 0.0;
    for (const auto& [i, j] : grp) {
      bsq += b.b_hat(i, j) * b.b_hat(i, j);
      gsq += g(i, j) * g(i, j);
    }
    const double bnorm = std::sqrt(bsq);
    double viol;
    if (bnorm == 0.0) {
      viol = std::max(std::sqrt(gsq) - wg, 0.0);
    } else {
      double sq = 0.0;
      for (const auto& [i, j] : grp) {
        const double t = g(i, j) + wg * b.b_hat(i, j) / bnorm;
        sq += t * t;
      }
      viol = std::sqrt(sq);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

}  // namespace eccar
