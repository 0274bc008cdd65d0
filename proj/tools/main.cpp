// eccar: fit / simulate / cv / eval / benchmark front end over the core
// library. All outputs except timings.json are deterministic per manifest.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eccar/eccar.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eccar;

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNumerical = 4;

struct CliError {
  int code;
  std::string type;
  std::string message;
};

CliError classify(const std::exception& e) {
  const std::string msg = e.what();
  if (dynamic_cast<const DegenerateSolution*>(&e))
    return {kExitDegenerate, "DegenerateSolution", msg};
  if (dynamic_cast<const NoViableModel*>(&e))
    return {kExitDegenerate, "NoViableModel", msg};
  if (dynamic_cast<const InvalidData*>(&e))
    return {kExitInput, "InvalidData", msg};
  if (dynamic_cast<const InvalidDimensions*>(&e))
    return {kExitInput, "InvalidDimensions", msg};
  if (dynamic_cast<const InvalidPartition*>(&e))
    return {kExitInput, "InvalidPartition", msg};
  if (dynamic_cast<const InvalidConfig*>(&e))
    return {kExitInput, "InvalidConfig", msg};
  if (dynamic_cast<const InvalidModel*>(&e))
    return {kExitInput, "InvalidModel", msg};
  if (dynamic_cast<const InvalidSignal*>(&e))
    return {kExitInput, "InvalidSignal", msg};
  if (dynamic_cast<const RankTooLarge*>(&e))
    return {kExitInput, "RankTooLarge", msg};
  if (dynamic_cast<const RankDeficient*>(&e))
    return {kExitInput, "RankDeficient", msg};
  if (dynamic_cast<const SingularCovariance*>(&e))
    return {kExitNumerical, "SingularCovariance", msg};
  if (dynamic_cast<const NumericalFailure*>(&e))
    return {kExitNumerical, "NumericalFailure", msg};
  return {kExitNumerical, "Error", msg};
}

std::string fnv1a_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidData("cannot open " + path);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
    if (!in) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(h));
  return out;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json make_manifest(const std::string& command, const json& config,
                   const std::map<std::string, std::string>& inputs) {
  json digests = json::object();
  for (const auto& [path, digest] : inputs) digests[path] = digest;
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"version", kVersion},
              {"config", config},
              {"input_digests", digests}};
}

void write_timings(const fs::path& dir, const std::string& command,
                   double seconds) {
  // Wall-clock measurements live here, outside the deterministic outputs.
  write_json(dir / "timings.json",
             json{{"schema_version", kSchemaVersion},
                  {"command", command},
                  {"seconds", seconds}});
}

GroupPartition parse_groups(const std::string& flag, int p, int q) {
  if (flag == "elementwise") return elementwise_partition(p, q);
  if (flag == "rows") return row_partition(p, q);
  if (flag.rfind("blocks:", 0) == 0) {
    const std::string dims = flag.substr(7);
    const auto x = dims.find('x');
    if (x == std::string::npos)
      throw InvalidConfig("--groups blocks needs BPxBQ, got " + flag);
    int bp = 0, bq = 0;
    try {
      bp = std::stoi(dims.substr(0, x));
      bq = std::stoi(dims.substr(x + 1));
    } catch (const std::exception&) {
      throw InvalidConfig("--groups blocks needs BPxBQ, got " + flag);
    }
    return block_partition(p, q, bp, bq);
  }
  if (flag.rfind("file:", 0) == 0)
    return read_partition_file(flag.substr(5), p, q);
  throw InvalidConfig("unknown --groups value: " + flag);
}

json fit_report_json(const FitReport& fit) {
  return json{{"iterations", fit.iterations},
              {"converged", fit.converged},
              {"primal_residual", fit.primal_residual},
              {"dual_residual", fit.dual_residual},
              {"objective", fit.objective},
              {"kkt_violation", fit.kkt_violation}};
}

void write_model_artifacts(const fs::path& dir, const CcaModel& model) {
  write_matrix_csv(model.u, (dir / "U.csv").string());
  write_matrix_csv(model.v, (dir / "V.csv").string());
  write_matrix_csv(model.b_hat, (dir / "B.csv").string());
  write_matrix_csv(model.lambda, (dir / "lambda.csv").string());
}

void write_error_report(const fs::path& dir, const std::string& command,
                        const CliError& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return;
  write_json(dir / "report.json", json{{"schema_version", kSchemaVersion},
                                       {"command", command},
                                       {"status", "error"},
                                       {"error",
                                        {{"type", err.type},
                                         {"message", err.message}}}});
}

std::vector<double> to_std(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string x_csv, y_csv, out_dir;
  int rank = 1;
  double weight = -1.0;  // < 0 means "use the theoretical rate"
  double weight_scale = 1.0;
  std::string groups = "elementwise";
  bool no_center = false;
  AdmmConfig admm;
};

void add_admm_flags(CLI::App* cmd, AdmmConfig& admm) {
  cmd->add_option("--step", admm.step, "ADMM augmentation parameter");
  cmd->add_option("--max-iter", admm.max_iter, "ADMM iteration cap");
  cmd->add_option("--eps-abs", admm.eps_abs, "absolute stopping tolerance");
  cmd->add_option("--eps-rel", admm.eps_rel, "relative stopping tolerance");
}

json admm_json(const AdmmConfig& admm) {
  return json{{"step", admm.step},
              {"max_iter", admm.max_iter},
              {"eps_abs", admm.eps_abs},
              {"eps_rel", admm.eps_rel}};
}

int run_fit(const FitArgs& a) {
  Timer timer;
  fs::create_directories(a.out_dir);
  const Dataset data{read_matrix_csv(a.x_csv), read_matrix_csv(a.y_csv)};
  data.validate();

  const GroupPartition partition =
      parse_groups(a.groups, static_cast<int>(data.p()),
                   static_cast<int>(data.q()));
  const double weight =
      a.weight >= 0.0
          ? a.weight
          : theoretical_penalty(data.n(), data.p(), data.q(), a.weight_scale);

  const CcaModel model =
      fit(data, a.rank, PenaltySpec{weight, partition}, a.admm, !a.no_center);

  const fs::path dir(a.out_dir);
  write_model_artifacts(dir, model);

  const json config{{"x", a.x_csv},
                    {"y", a.y_csv},
                    {"out", a.out_dir},
                    {"rank", a.rank},
                    {"weight", weight},
                    {"weight_scale", a.weight_scale},
                    {"groups", a.groups},
                    {"center", !a.no_center},
                    {"admm", admm_json(a.admm)}};
  write_json(dir / "report.json",
             json{{"schema_version", kSchemaVersion},
                  {"command", "fit"},
                  {"status", "ok"},
                  {"rank", model.rank},
                  {"effective_rank_reduced", model.effective_rank_reduced},
                  {"lambda", to_std(model.lambda)},
                  {"penalty_weight", model.penalty_used.weight},
                  {"fit", fit_report_json(model.fit)},
                  {"manifest",
                   make_manifest("fit", config,
                                 {{a.x_csv, fnv1a_digest(a.x_csv)},
                                  {a.y_csv, fnv1a_digest(a.y_csv)}})}});
  write_timings(dir, "fit", timer.seconds());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimArgs {
  std::string out_dir;
  SyntheticSpec spec;
  std::uint64_t seed = 0;
};

int run_simulate(const SimArgs& a) {
  Timer timer;
  SyntheticSpec spec = a.spec;
  spec.seed = a.seed;
  spec.validate();
  const GroundTruth truth = build_model(spec);
  const Dataset data = sample_dataset(truth, spec.n, a.seed + 1);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_matrix_csv(data.x, (dir / "X.csv").string());
  write_matrix_csv(data.y, (dir / "Y.csv").string());
  write_matrix_csv(truth.u_star, (dir / "U_star.csv").string());
  write_matrix_csv(truth.v_star, (dir / "V_star.csv").string());
  write_matrix_csv(truth.b_star, (dir / "B_star.csv").string());
  write_matrix_csv(truth.lambda_star, (dir / "lambda_star.csv").string());
  write_json(dir / "supports.json",
             json{{"schema_version", kSchemaVersion},
                  {"p", spec.p},
                  {"q", spec.q},
                  {"r", spec.r},
                  {"support_u", truth.support_u},
                  {"support_v", truth.support_v},
                  {"lambda", to_std(truth.lambda_star)}});

  const json config{{"out", a.out_dir}, {"n", spec.n},
                    {"p", spec.p},      {"q", spec.q},
                    {"r", spec.r},      {"s_u", spec.s_u},
                    {"s_v", spec.s_v},  {"signal", spec.signal},
                    {"p1", spec.p1},    {"r_pca", spec.r_pca},
                    {"seed", a.seed},   {"data_seed", a.seed + 1}};
  write_json(dir / "manifest.json", make_manifest("simulate", config, {}));
  write_timings(dir, "simulate", timer.seconds());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cv

struct CvArgs {
  std::string x_csv, y_csv, out_dir;
  int rank = 1;
  int folds = 10;
  int grid_length = 7;
  double grid_span = 10.0;
  std::uint64_t seed = 0;
  std::string groups = "elementwise";
  bool warm_start = false;
  bool no_center = false;
  AdmmConfig admm;
};

int run_cv(const CvArgs& a) {
  Timer timer;
  fs::create_directories(a.out_dir);
  const Dataset data{read_matrix_csv(a.x_csv), read_matrix_csv(a.y_csv)};
  data.validate();

  CvConfig cfg;
  cfg.k = a.folds;
  cfg.grid = penalty_grid(data.n(), data.p(), data.q(), a.grid_length,
                          a.grid_span);
  cfg.r = a.rank;
  cfg.seed = a.seed;
  cfg.admm = a.admm;
  cfg.warm_start = a.warm_start;
  cfg.center = !a.no_center;
  const GroupPartition partition =
      parse_groups(a.groups, static_cast<int>(data.p()),
                   static_cast<int>(data.q()));

  const CvResult result = cross_validate(data, cfg, partition);

  const fs::path dir(a.out_dir);
  {
    std::ofstream out(dir / "cv_path.csv");
    if (!out) throw InvalidData("cannot write cv_path.csv");
    out << "weight,mean_mse,se_mse\n";
    for (std::size_t i = 0; i < cfg.grid.size(); ++i)
      out << format_double(cfg.grid[i]) << ','
          << format_double(result.mean_val_mse[i]) << ','
          << format_double(result.se_val_mse[i]) << '\n';
  }
  write_model_artifacts(dir, result.chosen_model);

  const json config{{"x", a.x_csv},
                    {"y", a.y_csv},
                    {"out", a.out_dir},
                    {"rank", a.rank},
                    {"folds", a.folds},
                    {"grid_length", a.grid_length},
                    {"grid_span", a.grid_span},
                    {"seed", a.seed},
                    {"groups", a.groups},
                    {"warm_start", a.warm_start},
                    {"center", !a.no_center},
                    {"admm", admm_json(a.admm)}};
  write_json(dir / "report.json",
             json{{"schema_version", kSchemaVersion},
                  {"command", "cv"},
                  {"status", "ok"},
                  {"chosen_weight", result.chosen_weight},
                  {"chosen_index", result.chosen_index},
                  {"grid", cfg.grid},
                  {"mean_val_mse", result.mean_val_mse},
                  {"rank", result.chosen_model.rank},
                  {"effective_rank_reduced",
                   result.chosen_model.effective_rank_reduced},
                  {"lambda", to_std(result.chosen_model.lambda)},
                  {"fit", fit_report_json(result.chosen_model.fit)},
                  {"manifest",
                   make_manifest("cv", config,
                                 {{a.x_csv, fnv1a_digest(a.x_csv)},
                                  {a.y_csv, fnv1a_digest(a.y_csv)}})}});
  write_timings(dir, "cv", timer.seconds());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string model_dir;
  std::string truth_dir;
  std::string x_csv, y_csv;
  std::string out_path;
};

int run_eval(const EvalArgs& a) {
  Timer timer;
  const fs::path model(a.model_dir);
  const Matrix u = read_matrix_csv((model / "U.csv").string());
  const Matrix v = read_matrix_csv((model / "V.csv").string());
  const Matrix b = read_matrix_csv((model / "B.csv").string());

  json metrics{{"schema_version", kSchemaVersion}, {"command", "eval"}};
  std::map<std::string, std::string> inputs;

  if (!a.truth_dir.empty()) {
    const fs::path truth_dir(a.truth_dir);
    const Matrix u_star =
        read_matrix_csv((truth_dir / "U_star.csv").string());
    const Matrix v_star =
        read_matrix_csv((truth_dir / "V_star.csv").string());
    std::ifstream in(truth_dir / "supports.json");
    if (!in)
      throw InvalidData("cannot open " + (truth_dir / "supports.json").string());
    json supports = json::parse(in);

    const Index k = std::min(u.cols(), u_star.cols());
    Matrix stacked_hat(u.rows() + v.rows(), k);
    stacked_hat << u.leftCols(k), v.leftCols(k);
    Matrix stacked_star(u_star.rows() + v_star.rows(), k);
    stacked_star << u_star.leftCols(k), v_star.leftCols(k);

    GroundTruth truth;
    truth.sigma_x = Matrix::Zero(u_star.rows(), 0);
    truth.sigma_y = Matrix::Zero(v_star.rows(), 0);
    truth.support_u = supports.at("support_u").get<std::vector<int>>();
    truth.support_v = supports.at("support_v").get<std::vector<int>>();
    const SupportMetrics sm = support_metrics(CoefficientEstimate{b}, truth);

    metrics["stacked_sin_theta"] =
        sin_theta_distance(stacked_star, stacked_hat);
    metrics["procrustes_u"] = procrustes_distance(u.leftCols(k),
                                                  u_star.leftCols(k));
    metrics["procrustes_v"] = procrustes_distance(v.leftCols(k),
                                                  v_star.leftCols(k));
    metrics["support"] = json{{"precision", sm.precision},
                              {"recall", sm.recall},
                              {"f1", sm.f1},
                              {"exact_subset", sm.exact_subset},
                              {"empty_prediction", sm.empty_prediction}};
    inputs[(truth_dir / "supports.json").string()] =
        fnv1a_digest((truth_dir / "supports.json").string());
  }

  if (!a.x_csv.empty() || !a.y_csv.empty()) {
    if (a.x_csv.empty() || a.y_csv.empty())
      throw InvalidConfig("eval needs both --x and --y or neither");
    const Dataset data{read_matrix_csv(a.x_csv), read_matrix_csv(a.y_csv)};
    data.validate();
    if (data.p() != u.rows() || data.q() != v.rows())
      throw InvalidDimensions("eval: data columns do not match the model");

    metrics["prediction_mse"] = prediction_mse(u, v, data);
    const VariateCorrelation corr = variate_correlation(u, v, data);
    metrics["variate_correlation"] = to_std(corr.corr);
    metrics["variate_degenerate"] =
        std::vector<bool>(corr.degenerate.begin(), corr.degenerate.end());

    const CovarianceModel cov = empirical_covariances(data, true);
    const Index r = u.cols();
    metrics["normalization_error_u"] =
        (u.transpose() * cov.sigma_x * u - Matrix::Identity(r, r)).norm();
    metrics["normalization_error_v"] =
        (v.transpose() * cov.sigma_y * v - Matrix::Identity(r, r)).norm();
    inputs[a.x_csv] = fnv1a_digest(a.x_csv);
    inputs[a.y_csv] = fnv1a_digest(a.y_csv);
  }

  const json config{{"model", a.model_dir},
                    {"truth", a.truth_dir},
                    {"x", a.x_csv},
                    {"y", a.y_csv},
                    {"out", a.out_path}};
  metrics["manifest"] = make_manifest("eval", config, inputs);

  const fs::path out = a.out_path.empty() ? model / "metrics.json"
                                          : fs::path(a.out_path);
  write_json(out, metrics);
  write_timings(out.parent_path().empty() ? fs::path(".")
                                          : out.parent_path(),
                "eval", timer.seconds());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// benchmark

SweepSpec parse_sweep_spec(const json& j) {
  SweepSpec spec;
  if (!j.contains("master_seed"))
    throw InvalidConfig("benchmark spec must set master_seed");
  spec.master_seed = j.at("master_seed").get<std::uint64_t>();
  spec.p_values = j.at("p_values").get<std::vector<int>>();
  spec.n_values = j.at("n_values").get<std::vector<int>>();
  spec.r_values = j.at("r_values").get<std::vector<int>>();
  spec.s_values = j.at("s_values").get<std::vector<int>>();
  spec.signal_values = j.at("signal_values").get<std::vector<double>>();
  spec.replications = j.value("replications", 25);
  for (const auto& name : j.at("variants"))
    spec.variants.push_back(
        method_variant_from_string(name.get<std::string>()));
  spec.block_bp = j.value("block_bp", 5);
  spec.block_bq = j.value("block_bq", 5);
  spec.p1 = j.value("p1", 20);
  spec.r_pca = j.value("r_pca", 5);
  if (j.contains("penalty")) {
    const json& pj = j.at("penalty");
    const std::string rule = pj.value("rule", "theoretical");
    if (rule == "theoretical") {
      spec.penalty.kind = PenaltyRuleKind::Theoretical;
    } else if (rule == "cv") {
      spec.penalty.kind = PenaltyRuleKind::CrossValidation;
    } else {
      throw InvalidConfig("unknown penalty rule: " + rule);
    }
    spec.penalty.theoretical_scale = pj.value("scale", 1.0);
    spec.penalty.cv_folds = pj.value("folds", 10);
    spec.penalty.cv_grid_length = pj.value("grid_length", 7);
    spec.penalty.cv_grid_span = pj.value("grid_span", 10.0);
  }
  if (j.contains("admm")) {
    const json& aj = j.at("admm");
    spec.admm.step = aj.value("step", spec.admm.step);
    spec.admm.max_iter = aj.value("max_iter", spec.admm.max_iter);
    spec.admm.eps_abs = aj.value("eps_abs", spec.admm.eps_abs);
    spec.admm.eps_rel = aj.value("eps_rel", spec.admm.eps_rel);
  }
  return spec;
}

struct BenchArgs {
  std::string spec_path;
  std::string out_dir;
};

int run_benchmark(const BenchArgs& a) {
  Timer timer;
  std::ifstream in(a.spec_path);
  if (!in) throw InvalidData("cannot open " + a.spec_path);
  json spec_json;
  try {
    spec_json = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidData(a.spec_path + ": " + e.what());
  }
  const SweepSpec spec = parse_sweep_spec(spec_json);

  const SweepResult result = run_sweep(spec);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_sweep_csv(result, (dir / "results.csv").string());
  write_sweep_summary_csv(result, (dir / "summary.csv").string());
  write_sweep_timings_csv(result, (dir / "timings.csv").string());

  const json config{{"spec", a.spec_path},
                    {"out", a.out_dir},
                    {"resolved_spec", spec_json},
                    {"master_seed", spec.master_seed}};
  write_json(dir / "manifest.json",
             make_manifest("benchmark", config,
                           {{a.spec_path, fnv1a_digest(a.spec_path)}}));
  write_timings(dir, "benchmark", timer.seconds());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse CCA via penalized reduced-rank regression"};
  app.require_subcommand(1);
  // Keys live in a [fit]/[cv]/... section; command-line flags take precedence.
  app.set_config("--config", "", "TOML config file");

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a model on CSV matrices");
  fit_cmd->add_option("--x", fit_args.x_csv, "X data CSV (rows = samples)")
      ->required();
  fit_cmd->add_option("--y", fit_args.y_csv, "Y data CSV (rows = samples)")
      ->required();
  fit_cmd->add_option("--out", fit_args.out_dir, "output directory")
      ->required();
  fit_cmd->add_option("--rank", fit_args.rank, "number of canonical pairs")
      ->required();
  fit_cmd->add_option("--weight", fit_args.weight,
                      "penalty weight; omit to use the theoretical rate");
  fit_cmd->add_option("--weight-scale", fit_args.weight_scale,
                      "scale on the theoretical rate");
  fit_cmd->add_option("--groups", fit_args.groups,
                      "elementwise|rows|blocks:BPxBQ|file:PATH");
  fit_cmd->add_flag("--no-center", fit_args.no_center,
                    "skip column centering");
  add_admm_flags(fit_cmd, fit_args.admm);

  SimArgs sim_args;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "generate synthetic ground-truth data");
  sim_cmd->add_option("--out", sim_args.out_dir, "output directory")
      ->required();
  sim_cmd->add_option("--n", sim_args.spec.n, "samples")->required();
  sim_cmd->add_option("--p", sim_args.spec.p, "X dimension")->required();
  sim_cmd->add_option("--q", sim_args.spec.q, "Y dimension")->required();
  sim_cmd->add_option("--rank", sim_args.spec.r, "true rank")->required();
  sim_cmd->add_option("--s-u", sim_args.spec.s_u, "nonzero rows of U*")
      ->required();
  sim_cmd->add_option("--s-v", sim_args.spec.s_v, "nonzero rows of V*")
      ->required();
  sim_cmd->add_option("--signal", sim_args.spec.signal,
                      "canonical correlation in [0, 1)");
  sim_cmd->add_option("--p1", sim_args.spec.p1, "covariance block size");
  sim_cmd->add_option("--r-pca", sim_args.spec.r_pca, "covariance block rank");
  sim_cmd->add_option("--seed", sim_args.seed, "RNG seed")->required();

  CvArgs cv_args;
  CLI::App* cv_cmd =
      app.add_subcommand("cv", "cross-validate the penalty weight");
  cv_cmd->add_option("--x", cv_args.x_csv, "X data CSV")->required();
  cv_cmd->add_option("--y", cv_args.y_csv, "Y data CSV")->required();
  cv_cmd->add_option("--out", cv_args.out_dir, "output directory")->required();
  cv_cmd->add_option("--rank", cv_args.rank, "number of canonical pairs")
      ->required();
  cv_cmd->add_option("--folds", cv_args.folds, "number of folds");
  cv_cmd->add_option("--grid-length", cv_args.grid_length,
                     "penalty grid length");
  cv_cmd->add_option("--grid-span", cv_args.grid_span,
                     "grid span around the theoretical rate");
  cv_cmd->add_option("--seed", cv_args.seed, "fold-assignment seed");
  cv_cmd->add_option("--groups", cv_args.groups,
                     "elementwise|rows|blocks:BPxBQ|file:PATH");
  cv_cmd->add_flag("--warm-start", cv_args.warm_start,
                   "warm-start along the grid");
  cv_cmd->add_flag("--no-center", cv_args.no_center, "skip column centering");
  add_admm_flags(cv_cmd, cv_args.admm);

  EvalArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "score a fitted model against truth or data");
  eval_cmd->add_option("--model", eval_args.model_dir,
                       "model directory (U.csv, V.csv, B.csv)")
      ->required();
  eval_cmd->add_option("--truth", eval_args.truth_dir,
                       "truth bundle directory from `simulate`");
  eval_cmd->add_option("--x", eval_args.x_csv, "test X CSV");
  eval_cmd->add_option("--y", eval_args.y_csv, "test Y CSV");
  eval_cmd->add_option("--out", eval_args.out_path,
                       "metrics path (default MODEL/metrics.json)");

  BenchArgs bench_args;
  CLI::App* bench_cmd =
      app.add_subcommand("benchmark", "run a sweep from a JSON spec");
  bench_cmd->add_option("--spec", bench_args.spec_path, "sweep spec JSON")
      ->required();
  bench_cmd->add_option("--out", bench_args.out_dir, "output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  std::string command;
  std::string report_dir;
  try {
    if (fit_cmd->parsed()) {
      command = "fit";
      report_dir = fit_args.out_dir;
      return run_fit(fit_args);
    }
    if (sim_cmd->parsed()) {
      command = "simulate";
      report_dir = sim_args.out_dir;
      return run_simulate(sim_args);
    }
    if (cv_cmd->parsed()) {
      command = "cv";
      report_dir = cv_args.out_dir;
      return run_cv(cv_args);
    }
    if (eval_cmd->parsed()) {
      command = "eval";
      report_dir = eval_args.model_dir;
      return run_eval(eval_args);
    }
    command = "benchmark";
    report_dir = bench_args.out_dir;
    return run_benchmark(bench_args);
  } catch (const std::exception& e) {
    const CliError err = classify(e);
    std::cerr << "eccar " << command << ": " << err.type << ": "
              << err.message << '\n';
    if (!report_dir.empty()) write_error_report(report_dir, command, err);
    return err.code;
  }
}
