#include <benchmark/benchmark.h>

#include "eccar/eccar.hpp"

using namespace eccar;

namespace {

CovarianceModel make_cov(int p, int n) {
  SyntheticSpec spec;
  spec.n = n;
  spec.p = p;
  spec.q = p;
  spec.r = 2;
  spec.s_u = 5;
  spec.s_v = 5;
  spec.signal = 0.9;
  spec.p1 = std::min(20, p);
  spec.r_pca = std::min(5, spec.p1);
  spec.seed = 1;
  GroundTruth truth = build_model(spec);
  return empirical_covariances(sample_dataset(truth, n, 2), true);
}

void bm_empirical_covariances(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  SyntheticSpec spec;
  spec.n = 200;
  spec.p = p;
  spec.q = p;
  spec.r = 2;
  spec.s_u = 5;
  spec.s_v = 5;
  spec.signal = 0.9;
  spec.p1 = std::min(20, p);
  spec.r_pca = std::min(5, spec.p1);
  spec.seed = 1;
  GroundTruth truth = build_model(spec);
  Dataset data = sample_dataset(truth, 200, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(empirical_covariances(data, true));
}
BENCHMARK(bm_empirical_covariances)->Arg(100)->Arg(250)->Arg(500);

void bm_b_update(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  CovarianceModel cov = make_cov(p, 200);
  Matrix z = Matrix::Zero(p, p);
  Matrix h = Matrix::Zero(p, p);
  for (auto _ : state) benchmark::DoNotOptimize(b_update(cov, z, h, 1.0));
}
BENCHMARK(bm_b_update)->Arg(100)->Arg(250)->Arg(500)->Arg(1000)
    ->Unit(benchmark::kMillisecond);

void bm_admm_iterations(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  CovarianceModel cov = make_cov(p, 200);
  PenaltySpec penalty{theoretical_penalty(200, p, p, 1.0),
                      elementwise_partition(p, p)};
  AdmmConfig cfg;
  cfg.max_iter = 20;
  cfg.eps_abs = 0.0;  // run exactly max_iter iterations
  cfg.eps_rel = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(admm_fit(cov, penalty, cfg));
}
BENCHMARK(bm_admm_iterations)->Arg(100)->Arg(250)->Arg(500)
    ->Unit(benchmark::kMillisecond);

void bm_soft_threshold(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  Matrix m = Matrix::Random(p, p);
  for (auto _ : state) benchmark::DoNotOptimize(soft_threshold(m, 0.3));
}
BENCHMARK(bm_soft_threshold)->Arg(250)->Arg(1000);

void bm_group_threshold_blocks(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  Matrix m = Matrix::Random(p, p);
  GroupPartition blocks = block_partition(p, p, 5, 5);
  for (auto _ : state)
    benchmark::DoNotOptimize(group_threshold(m, 0.3, blocks));
}
BENCHMARK(bm_group_threshold_blocks)->Arg(250)->Arg(1000);

void bm_truncated_svd(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  Matrix m = Matrix::Random(p, p);
  for (auto _ : state) benchmark::DoNotOptimize(truncated_svd(m, 5));
}
BENCHMARK(bm_truncated_svd)->Arg(100)->Arg(500)
    ->Unit(benchmark::kMillisecond);

void bm_full_fit(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  SyntheticSpec spec;
  spec.n = 200;
  spec.p = p;
  spec.q = p;
  spec.r = 2;
  spec.s_u = 5;
  spec.s_v = 5;
  spec.signal = 0.9;
  spec.p1 = std::min(20, p);
  spec.r_pca = std::min(5, spec.p1);
  spec.seed = 3;
  GroundTruth truth = build_model(spec);
  Dataset data = sample_dataset(truth, 200, 4);
  PenaltySpec penalty{theoretical_penalty(200, p, p, 1.0),
                      elementwise_partition(p, p)};
  for (auto _ : state)
    benchmark::DoNotOptimize(fit(data, 2, penalty, AdmmConfig{}));
}
BENCHMARK(bm_full_fit)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
