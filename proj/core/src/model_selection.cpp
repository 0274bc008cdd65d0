#include "eccar/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "eccar/evaluation.hpp"
#include "eccar/parallel.hpp"

namespace eccar {

std::vector<std::vector<int>> kfold_split(int n, int k, std::uint64_t seed) {
  if (k < 2 || k > n)
    throw InvalidConfig("kfold_split: need 2 <= k <= n, got k=" +
                        std::to_string(k) + " n=" + std::to_string(n));
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::vector<int>> folds(k);
  for (int i = 0; i < n; ++i) folds[i % k].push_back(idx[i]);
  return folds;
}

std::vector<double> penalty_grid(Index n, Index p, Index q, int length,
                                 double span) {
  if (length < 1) throw InvalidConfig("penalty_grid: length must be >= 1");
  if (span <= 1.0) throw InvalidConfig("penalty_grid: span must exceed 1");
  const double center = theoretical_penalty(n, p, q, 1.0);
  if (length == 1) return {center};
  std::vector<double> grid(length);
  const double lo = std::log(center / span);
  const double hi = std::log(center * span);
  for (int i = 0; i < length; ++i)
    grid[i] = std::exp(lo + (hi - lo) * i / (length - 1));
  return grid;
}

namespace {

Dataset select_rows(const Dataset& data, const std::vector<int>& rows) {
  Dataset out;
  out.x.resize(rows.size(), data.p());
  out.y.resize(rows.size(), data.q());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(i) = data.x.row(rows[i]);
    out.y.row(i) = data.y.row(rows[i]);
  }
  return out;
}

void check_config(const Dataset& data, const CvConfig& cfg) {
  data.validate();
  if (cfg.grid.empty()) throw InvalidConfig("cross_validate: empty grid");
  if (!std::is_sorted(cfg.grid.begin(), cfg.grid.end()) || cfg.grid.front() < 0)
    throw InvalidConfig("cross_validate: grid must be ascending and nonnegative");
  if (cfg.k < 2 || cfg.k > data.n())
    throw InvalidConfig("cross_validate: bad fold count");
}

}  // namespace

CvResult cross_validate(const Dataset& data, const CvConfig& cfg,
                        const GroupPartition& partition) {
  check_config(data, cfg);
  const auto folds = kfold_split(static_cast<int>(data.n()), cfg.k, cfg.seed);
  const std::size_t n_grid = cfg.grid.size();
  const double inf = std::numeric_limits<double>::infinity();

  CvResult result;
  result.per_fold = Matrix::Constant(cfg.k, static_cast<Index>(n_grid), inf);

  // Grid points within a fold run sequentially (warm starts); folds are
  // independent. Writes go to fixed slots, so the reduction is deterministic.
  parallel_for(folds.size(), [&](std::size_t f) {
    std::vector<int> train_rows;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f)
        train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
    std::sort(train_rows.begin(), train_rows.end());

    Dataset train = select_rows(data, train_rows);
    Dataset val = select_rows(data, folds[f]);
    CovarianceModel cov = empirical_covariances(train, cfg.center);
    const Vector x_mean = cfg.center ? Vector(train.x.colwise().mean())
                                     : Vector(Vector::Zero(train.p()));
    const Vector y_mean = cfg.center ? Vector(train.y.colwise().mean())
                                     : Vector(Vector::Zero(train.q()));
    // Centering statistics come from training rows only.
    Dataset val_centered;
    val_centered.x = val.x.rowwise() - x_mean.transpose();
    val_centered.y = val.y.rowwise() - y_mean.transpose();

    std::optional<AdmmWarmStart> warm;
    for (std::size_t w = 0; w < n_grid; ++w) {
      AdmmWarmStart state;
      try {
        PenaltySpec penalty{cfg.grid[w], partition};
        CcaModel model = fit_from_covariances(
            cov, cfg.r, penalty, cfg.admm, Vector::Zero(train.p()),
            Vector::Zero(train.q()), warm, &state);
        result.per_fold(static_cast<Index>(f), static_cast<Index>(w)) =
            prediction_mse(model.u, model.v, val_centered);
      } catch (const DegenerateSolution&) {
        // over-penalized grid point on this fold; already +inf
      }
      if (cfg.warm_start && state.z.size() > 0) warm = std::move(state);
    }
  });

  result.mean_val_mse.resize(n_grid);
  result.se_val_mse.resize(n_grid);
  for (std::size_t w = 0; w < n_grid; ++w) {
    const auto col = result.per_fold.col(static_cast<Index>(w));
    double mean = col.mean();
    result.mean_val_mse[w] = mean;
    if (std::isfinite(mean) && cfg.k > 1) {
      double var = (col.array() - mean).square().sum() / (cfg.k - 1);
      result.se_val_mse[w] = std::sqrt(var / cfg.k);
    } else {
      result.se_val_mse[w] = inf;
    }
  }

  bool found = false;
  double best = inf;
  for (std::size_t w = 0; w < n_grid; ++w) {
    const double m = result.mean_val_mse[w];
    if (!std::isfinite(m)) continue;
    if (!found || m <= best) {  // ties resolve toward the larger weight
      best = m;
      result.chosen_index = w;
      found = true;
    }
  }
  if (!found)
    throw NoViableModel("cross_validate: every grid point degenerate on every fold");
  result.chosen_weight = cfg.grid[result.chosen_index];

  try {
    result.chosen_model =
        fit(data, cfg.r, PenaltySpec{result.chosen_weight, partition}, cfg.admm,
            cfg.center);
  } catch (const DegenerateSolution&) {
    throw NoViableModel("cross_validate: refit at chosen weight is degenerate");
  }
  return result;
}

}  // namespace eccar
