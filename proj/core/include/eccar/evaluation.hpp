#pragma once

#include <vector>

#include "eccar/rrr_solver.hpp"
#include "eccar/synthetic_data.hpp"

namespace eccar {

/// ||sin Theta||_F between the column spans of a and b; symmetric and
/// invariant to right-multiplication by invertible matrices.
double sin_theta_distance(const Matrix& a, const Matrix& b);

/// min over orthogonal O of ||a_hat - a * O||_F.
double procrustes_distance(const Matrix& a_hat, const Matrix& a);

/// ||X u - Y v||_F^2 / (n r); +infinity when u and v are both zero, so that
/// model selection can never pick an empty model.
double prediction_mse(const Matrix& u, const Matrix& v, const Dataset& data);

struct VariateCorrelation {
  Vector corr;                  // per direction, in [-1, 1]
  std::vector<bool> degenerate;  // zero-variance variate reported as corr 0
};

VariateCorrelation variate_correlation(const Matrix& u, const Matrix& v,
                                       const Dataset& data);

struct SupportMetrics {
  double precision = 1.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool exact_subset = false;  // supp(b_hat) subset of S_u x S_v
  bool empty_prediction = false;
};

SupportMetrics support_metrics(const CoefficientEstimate& b_hat,
                               const GroundTruth& truth);

}  // namespace eccar
