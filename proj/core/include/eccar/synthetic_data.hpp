#pragma once

#include <cstdint>
#include <vector>

#include "eccar/types.hpp"

namespace eccar {

struct SyntheticSpec {
  int n = 0;
  int p = 0;
  int q = 0;
  int r = 1;
  int s_u = 0;  // nonzero rows of u_star
  int s_v = 0;  // nonzero rows of v_star
  double signal = 0.9;  // lambda_star, shared across directions
  int p1 = 20;          // sparse-PCA block size (both sides)
  int r_pca = 5;        // block rank
  std::uint64_t seed = 0;

  void validate() const;
};

/// Signal-strength presets.
inline constexpr double kSignalHigh = 0.9;
inline constexpr double kSignalMedium = 0.7;
inline constexpr double kSignalWeak = 0.5;

struct GroundTruth {
  Matrix u_star;       // p x r
  Matrix v_star;       // q x r
  Vector lambda_star;  // r, all equal to signal
  Matrix sigma_x;
  Matrix sigma_y;
  Matrix sigma_xy;
  Matrix b_star;  // u_star * diag(lambda_star) * v_star^T
  std::vector<int> support_u;
  std::vector<int> support_v;
  Matrix joint_chol;  // lower Cholesky factor of the (p+q) joint covariance

  Index p() const { return sigma_x.rows(); }
  Index q() const { return sigma_y.rows(); }
  Index rank() const { return lambda_star.size(); }
};

/// Block-diagonal covariance construction with known sparse canonical pairs;
/// deterministic per seed.
GroundTruth build_model(const SyntheticSpec& spec);

/// n i.i.d. Gaussian rows through the stored Cholesky factor;
/// reproducible per (truth, n, seed).
Dataset sample_dataset(const GroundTruth& truth, int n, std::uint64_t seed);

}  // namespace eccar
