#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eccar/evaluation.hpp"
#include "eccar/model_selection.hpp"

namespace eccar {

enum class MethodVariant { EccarL1, EccarGroupBlock, EccarRow, LowDimClosedForm };

std::string to_string(MethodVariant v);
MethodVariant method_variant_from_string(const std::string& name);

enum class PenaltyRuleKind { Theoretical, CrossValidation };

struct PenaltyRule {
  PenaltyRuleKind kind = PenaltyRuleKind::Theoretical;
  double theoretical_scale = 1.0;  // the a in a * sqrt(log(p+q)/n)
  int cv_folds = 10;
  int cv_grid_length = 7;
  double cv_grid_span = 10.0;
};

struct SweepSpec {
  std::vector<int> p_values;  // q tracks p
  std::vector<int> n_values;
  std::vector<int> r_values;
  std::vector<int> s_values;  // s_u = s_v
  std::vector<double> signal_values;
  int replications = 25;
  std::vector<MethodVariant> variants;
  int block_bp = 5;
  int block_bq = 5;
  int p1 = 20;
  int r_pca = 5;
  PenaltyRule penalty;
  AdmmConfig admm;
  std::uint64_t master_seed = 0;
};

struct SweepRecord {
  int p = 0, q = 0, n = 0, r = 0, s = 0;
  double signal = 0.0;
  MethodVariant variant = MethodVariant::EccarL1;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double stacked_sin_theta = 0.0;
  double seconds = 0.0;
  bool converged = false;
  int iterations = 0;
  double support_precision = 0.0;
  double support_recall = 0.0;
  bool exact_subset = false;
};

struct SweepCellSummary {
  int p = 0, q = 0, n = 0, r = 0, s = 0;
  double signal = 0.0;
  MethodVariant variant = MethodVariant::EccarL1;
  int records = 0;
  int failures = 0;
  double median_distance = 0.0;
  double iqr_distance = 0.0;
  double mean_distance = 0.0;
  double mean_seconds = 0.0;
  double convergence_rate = 0.0;
  double mean_recall = 0.0;
  double exact_subset_rate = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;    // cells x replications x variants
  std::vector<SweepCellSummary> cells;  // canonical cell order
};

/// Record sink for incremental flushing; invoked in canonical order.
using SweepProgress = std::function<void(const SweepRecord&)>;

SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress = {});

/// Deterministic per-record table; wall-clock timings live in the separate
/// timings file so reruns stay byte-identical.
void write_sweep_csv(const SweepResult& result, const std::string& path);
void write_sweep_summary_csv(const SweepResult& result, const std::string& path);
void write_sweep_timings_csv(const SweepResult& result, const std::string& path);

}  // namespace eccar
