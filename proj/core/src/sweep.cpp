#include "eccar/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "eccar/csv.hpp"
#include "eccar/parallel.hpp"

namespace eccar {

std::string to_string(MethodVariant v) {
  switch (v) {
    case MethodVariant::EccarL1: return "eccar-l1";
    case MethodVariant::EccarGroupBlock: return "eccar-group";
    case MethodVariant::EccarRow: return "eccar-row";
    case MethodVariant::LowDimClosedForm: return "lowdim-closed-form";
  }
  return "unknown";
}

MethodVariant method_variant_from_string(const std::string& name) {
  if (name == "eccar-l1") return MethodVariant::EccarL1;
  if (name == "eccar-group") return MethodVariant::EccarGroupBlock;
  if (name == "eccar-row") return MethodVariant::EccarRow;
  if (name == "lowdim-closed-form") return MethodVariant::LowDimClosedForm;
  throw InvalidConfig("unknown method variant: " + name);
}

namespace {

struct Cell {
  int p, n, r, s;
  double signal;
};

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b) {
  // splitmix64 over a job-unique counter
  std::uint64_t x = master + 0x9E3779B97F4A7C15ULL * (a * 2654435761ULL + b + 1);
  x ^= x >> 30; x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27; x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - lo;
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

Matrix stacked(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress) {
  if (spec.replications < 1) throw InvalidConfig("run_sweep: replications < 1");
  if (spec.variants.empty()) throw InvalidConfig("run_sweep: no variants");

  std::vector<Cell> cells;
  for (int p : spec.p_values)
    for (int n : spec.n_values)
      for (int r : spec.r_values)
        for (int s : spec.s_values)
          for (double signal : spec.signal_values)
            cells.push_back({p, n, r, s, signal});

  const std::size_t jobs =
      cells.size() * spec.replications * spec.variants.size();
  SweepResult result;
  result.records.resize(jobs);

  parallel_for(jobs, [&](std::size_t job) {
    const std::size_t per_cell = spec.replications * spec.variants.size();
    const std::size_t ci = job / per_cell;
    const std::size_t rep = (job % per_cell) / spec.variants.size();
    const std::size_t vi = job % spec.variants.size();
    const Cell& cell = cells[ci];

    SweepRecord& rec = result.records[job];
    rec.p = cell.p;
    rec.q = cell.p;
    rec.n = cell.n;
    rec.r = cell.r;
    rec.s = cell.s;
    rec.signal = cell.signal;
    rec.variant = spec.variants[vi];
    rec.seed = derive_seed(spec.master_seed, ci, rep);

    try {
      SyntheticSpec model_spec;
      model_spec.n = cell.n;
      model_spec.p = cell.p;
      model_spec.q = cell.p;
      model_spec.r = cell.r;
      model_spec.s_u = cell.s;
      model_spec.s_v = cell.s;
      model_spec.signal = cell.signal;
      model_spec.p1 = std::min(spec.p1, cell.p);
      model_spec.r_pca = std::min(spec.r_pca, model_spec.p1);
      model_spec.seed = rec.seed;
      GroundTruth truth = build_model(model_spec);
      Dataset data = sample_dataset(truth, cell.n, derive_seed(rec.seed, ci, 1));

      const auto t0 = std::chrono::steady_clock::now();
      CcaModel model;
      if (rec.variant == MethodVariant::LowDimClosedForm) {
        model = fit_low_dim(data, cell.r);
      } else {
        GroupPartition partition;
        switch (rec.variant) {
          case MethodVariant::EccarGroupBlock:
            partition = block_partition(cell.p, cell.p, spec.block_bp, spec.block_bq);
            break;
          case MethodVariant::EccarRow:
            partition = row_partition(cell.p, cell.p);
            break;
          default:
            partition = elementwise_partition(cell.p, cell.p);
        }
        if (spec.penalty.kind == PenaltyRuleKind::Theoretical) {
          const double w = theoretical_penalty(cell.n, cell.p, cell.p,
                                               spec.penalty.theoretical_scale);
          model = fit(data, cell.r, PenaltySpec{w, partition}, spec.admm);
        } else {
          CvConfig cv;
          cv.k = spec.penalty.cv_folds;
          cv.grid = penalty_grid(cell.n, cell.p, cell.p,
                                 spec.penalty.cv_grid_length,
                                 spec.penalty.cv_grid_span);
          cv.r = cell.r;
          cv.seed = derive_seed(rec.seed, ci, 2);
          cv.admm = spec.admm;
          model = cross_validate(data, cv, partition).chosen_model;
        }
      }
      const auto t1 = std::chrono::steady_clock::now();
      rec.seconds = std::chrono::duration<double>(t1 - t0).count();

      const Index k = std::min<Index>(model.rank, cell.r);
      rec.stacked_sin_theta = sin_theta_distance(
          stacked(truth.u_star.leftCols(k), truth.v_star.leftCols(k)),
          stacked(model.u.leftCols(k), model.v.leftCols(k)));
      rec.converged = model.fit.converged;
      rec.iterations = model.fit.iterations;
      SupportMetrics sm = support_metrics(CoefficientEstimate{model.b_hat}, truth);
      rec.support_precision = sm.precision;
      rec.support_recall = sm.recall;
      rec.exact_subset = sm.exact_subset;
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  });

  if (progress)
    for (const auto& rec : result.records) progress(rec);

  // Deterministic fold in canonical (cell, variant) order.
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    for (std::size_t vi = 0; vi < spec.variants.size(); ++vi) {
      SweepCellSummary sum;
      const Cell& cell = cells[ci];
      sum.p = cell.p;
      sum.q = cell.p;
      sum.n = cell.n;
      sum.r = cell.r;
      sum.s = cell.s;
      sum.signal = cell.signal;
      sum.variant = spec.variants[vi];
      std::vector<double> dist;
      double sec = 0.0, recall = 0.0;
      int conv = 0, exact = 0;
      for (int rep = 0; rep < spec.replications; ++rep) {
        const std::size_t job =
            (ci * spec.replications + rep) * spec.variants.size() + vi;
        const SweepRecord& rec = result.records[job];
        ++sum.records;
        if (!rec.ok) {
          ++sum.failures;
          continue;
        }
        dist.push_back(rec.stacked_sin_theta);
        sec += rec.seconds;
        recall += rec.support_recall;
        conv += rec.converged ? 1 : 0;
        exact += rec.exact_subset ? 1 : 0;
      }
      const int ok = sum.records - sum.failures;
      if (ok > 0) {
        sum.median_distance = quantile(dist, 0.5);
        sum.iqr_distance = quantile(dist, 0.75) - quantile(dist, 0.25);
        double total = 0.0;
        for (double d : dist) total += d;
        sum.mean_distance = total / ok;
        sum.mean_seconds = sec / ok;
        sum.convergence_rate = static_cast<double>(conv) / ok;
        sum.mean_recall = recall / ok;
        sum.exact_subset_rate = static_cast<double>(exact) / ok;
      }
      result.cells.push_back(sum);
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write " + path);
  out << "p,q,n,r,s,signal,variant,seed,ok,error,stacked_sin_theta,"
         "converged,iterations,support_precision,support_recall,exact_subset\n";
  for (const auto& rec : result.records) {
    out << rec.p << ',' << rec.q << ',' << rec.n << ',' << rec.r << ','
        << rec.s << ',' << format_double(rec.signal) << ','
        << to_string(rec.variant) << ',' << rec.seed << ','
        << (rec.ok ? 1 : 0) << ',' << '"' << rec.error << '"' << ','
        << format_double(rec.stacked_sin_theta) << ','
        << (rec.converged ? 1 : 0) << ','
        << rec.iterations << ',' << format_double(rec.support_precision) << ','
        << format_double(rec.support_recall) << ','
        << (rec.exact_subset ? 1 : 0) << '\n';
  }
}

void write_sweep_summary_csv(const SweepResult& result,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write " + path);
  out << "p,q,n,r,s,signal,variant,records,failures,median_distance,"
         "iqr_distance,mean_distance,convergence_rate,"
         "mean_recall,exact_subset_rate\n";
  for (const auto& c : result.cells) {
    out << c.p << ',' << c.q << ',' << c.n << ',' << c.r << ',' << c.s << ','
        << format_double(c.signal) << ',' << to_string(c.variant) << ','
        << c.records << ',' << c.failures << ','
        << format_double(c.median_distance) << ','
        << format_double(c.iqr_distance) << ','
        << format_double(c.mean_distance) << ','
        << format_double(c.convergence_rate) << ','
        << format_double(c.mean_recall) << ','
        << format_double(c.exact_subset_rate) << '\n';
  }
}

void write_sweep_timings_csv(const SweepResult& result,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write " + path);
  out << "p,q,n,r,s,signal,variant,seed,seconds\n";
  for (const auto& rec : result.records) {
    out << rec.p << ',' << rec.q << ',' << rec.n << ',' << rec.r << ','
        << rec.s << ',' << format_double(rec.signal) << ','
        << to_string(rec.variant) << ',' << rec.seed << ','
        << format_double(rec.seconds) << '\n';
  }
}

}  // namespace eccar
