#pragma once

#include <optional>
#include <utility>

#include "eccar/matrix_kernels.hpp"

namespace eccar {

/// Penalty weight plus the partition it acts on. An elementwise partition
/// encodes the plain entrywise l1 penalty.
struct PenaltySpec {
  double weight = 0.0;
  GroupPartition partition;
};

struct AdmmConfig {
  double step = 1.0;  // augmentation parameter, constant across iterations
  int max_iter = 2000;
  double eps_abs = 1e-6;
  double eps_rel = 1e-5;
};

struct FitReport {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  double objective = 0.0;
  double kkt_violation = 0.0;
};

struct CoefficientEstimate {
  Matrix b_hat;
  // Zero entries come out of the thresholding step exactly, so support
  // reporting needs no tolerance.
  double numeric_zero_tol = 0.0;
};

/// Warm-start state for grid paths; both default to zero matrices.
struct AdmmWarmStart {
  Matrix z;
  Matrix h;
};

/// a * sqrt(ln(p+q) / n), the rate-optimal penalty scale.
double theoretical_penalty(Index n, Index p, Index q, double a);

/// Solves sigma_x * B * sigma_y + step * B = sigma_xy + step * (Z - H)
/// through the cached eigenbases; O(pq (p^n) + pq (q^n)) per call.
Matrix b_update(const CovarianceModel& cov, const Matrix& z, const Matrix& h,
                double step);

/// Penalized loss in covariance space, n/2 constant included:
/// (1/2) tr(Bt Sx B Sy) - <B, Sxy> + n/2 + weight * sum_g sqrt(T_g)||B_g||_F.
double objective(const Matrix& b, const CovarianceModel& cov,
                 const PenaltySpec& penalty);

std::pair<CoefficientEstimate, FitReport> admm_fit(
    const CovarianceModel& cov, const PenaltySpec& penalty,
    const AdmmConfig& config,
    const std::optional<AdmmWarmStart>& warm = std::nullopt,
    AdmmWarmStart* state_out = nullptr);

/// Max subgradient-condition violation of the penalized stationarity system
/// at b; zero at an exact optimum.
double kkt_violation(const CoefficientEstimate& b, const CovarianceModel& cov,
                     const PenaltySpec& penalty);

}  // namespace eccar
