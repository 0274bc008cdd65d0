#pragma once

#include <utility>

#include "eccar/rrr_solver.hpp"

namespace eccar {

struct CcaModel {
  Matrix u;       // p x rank
  Matrix v;       // q x rank
  Vector lambda;  // rank, descending, > 0
  Index rank = 0;
  PenaltySpec penalty_used;
  FitReport fit;
  bool effective_rank_reduced = false;
  Matrix b_hat;  // underlying coefficient estimate
  // Centering statistics from fit time, zero when centering was off.
  Vector x_mean;
  Vector y_mean;
};

/// Full ECCAR pipeline: penalized ADMM solve, rank-r SVD of
/// sqrt(Sx) * B * sqrt(Sy), then normalization of the singular vectors.
CcaModel fit(const Dataset& data, Index r, const PenaltySpec& penalty,
             const AdmmConfig& config, bool center = true);

/// Same pipeline starting from precomputed covariances; lets grid paths reuse
/// one CovarianceModel and warm-start the solver.
CcaModel fit_from_covariances(
    const CovarianceModel& cov, Index r, const PenaltySpec& penalty,
    const AdmmConfig& config, const Vector& x_mean, const Vector& y_mean,
    const std::optional<AdmmWarmStart>& warm = std::nullopt,
    AdmmWarmStart* state_out = nullptr);

/// Closed-form low-dimensional estimator: B = Sx^-1 Sxy Sy^-1, directions
/// U = Sx^-1/2 U0, V = Sy^-1/2 V0. Requires n > p, n > q and invertible
/// covariances.
CcaModel fit_low_dim(const Dataset& data, Index r, bool center = true);

/// Projections (X u, Y v) with the centering applied at fit time.
std::pair<Matrix, Matrix> canonical_variates(const CcaModel& model,
                                             const Dataset& data);

}  // namespace eccar
