#pragma once

#include <cstdint>
#include <vector>

#include "eccar/cca_pipeline.hpp"

namespace eccar {

struct CvConfig {
  int k = 10;
  std::vector<double> grid;  // ascending penalty weights
  Index r = 1;
  std::uint64_t seed = 0;
  AdmmConfig admm;
  bool warm_start = false;
  bool center = true;
};

struct CvResult {
  std::vector<double> mean_val_mse;  // per grid point, possibly +inf
  std::vector<double> se_val_mse;
  Matrix per_fold;  // k x |grid|
  double chosen_weight = 0.0;
  std::size_t chosen_index = 0;
  CcaModel chosen_model;  // refit on all rows at chosen_weight
};

/// Seeded shuffle into k disjoint folds with sizes differing by at most one.
std::vector<std::vector<int>> kfold_split(int n, int k, std::uint64_t seed);

/// Geometric grid of `length` points spanning
/// [theoretical_penalty / span, theoretical_penalty * span].
std::vector<double> penalty_grid(Index n, Index p, Index q, int length,
                                 double span);

/// K-fold CV over the penalty grid, scoring validation prediction MSE of
/// X U - Y V. Ties break toward the larger (sparser) weight.
CvResult cross_validate(const Dataset& data, const CvConfig& cfg,
                        const GroupPartition& partition);

}  // namespace eccar
