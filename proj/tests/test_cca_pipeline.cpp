#include <doctest.h>

#include <cmath>

#include "eccar/cca_pipeline.hpp"
#include "eccar/evaluation.hpp"
#include "eccar/synthetic_data.hpp"
#include "support/oracles.hpp"

using namespace eccar;

namespace {

PenaltySpec l1_penalty(double w, Index p, Index q) {
  return PenaltySpec{w, elementwise_partition(static_cast<int>(p),
                                              static_cast<int>(q))};
}

Dataset gaussian_dataset(Index n, Index p, Index q, std::uint64_t seed) {
  Dataset d;
  d.x = oracle::random_gaussian(n, p, seed);
  d.y = 0.6 * d.x.leftCols(std::min(p, q)).eval();
  d.y.conservativeResize(n, q);
  if (q > std::min(p, q))
    d.y.rightCols(q - std::min(p, q)) =
        oracle::random_gaussian(n, q - std::min(p, q), seed + 1);
  d.y += 0.8 * oracle::random_gaussian(n, q, seed + 2);
  return d;
}

}  // namespace

TEST_CASE("fit on an orthogonal design recovers diagonal correlations") {
  // Construct data whose empirical covariances are exactly identity with a
  // diagonal cross block, via a scaled orthogonal design.
  const Index n = 6;
  Matrix h(n, n);
  // Hadamard-like orthogonal basis from QR of a fixed matrix
  Eigen::HouseholderQR<Matrix> qr(oracle::random_gaussian(n, n, 5));
  h = Matrix(qr.householderQ()) * std::sqrt(static_cast<double>(n));
  Dataset d;
  d.x = h.leftCols(3);
  Vector corr(3);
  corr << 0.9, 0.5, 0.0;
  Vector noise = (1.0 - corr.array().square()).sqrt();
  d.y = d.x * corr.asDiagonal() + h.rightCols(3) * noise.asDiagonal();
  // sigma_x = I, sigma_y = I, sigma_xy = diag(corr)
  CcaModel model = fit(d, 2, l1_penalty(0.0, 3, 3), AdmmConfig{}, false);
  CHECK(model.rank == 2);
  CHECK(model.lambda[0] == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(model.lambda[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("over-penalized fit raises DegenerateSolution") {
  Dataset d = gaussian_dataset(30, 4, 3, 7);
  CovarianceModel cov = empirical_covariances(d, true);
  const double w = cov.sigma_xy.cwiseAbs().maxCoeff() * 2.0;
  CHECK_THROWS_AS(fit(d, 1, l1_penalty(w, 4, 3), AdmmConfig{}), DegenerateSolution);
}

TEST_CASE("fit rejects oversized rank") {
  Dataset d = gaussian_dataset(30, 4, 3, 7);
  CHECK_THROWS_AS(fit(d, 4, l1_penalty(0.0, 4, 3), AdmmConfig{}), RankTooLarge);
  CHECK_THROWS_AS(fit_low_dim(d, 4), RankTooLarge);
}

TEST_CASE("penalized pipeline matches the closed-form route when weight is 0") {
  Dataset d = gaussian_dataset(500, 4, 3, 11);
  AdmmConfig tight;
  tight.eps_abs = 1e-9;
  tight.eps_rel = 1e-8;
  tight.max_iter = 20000;
  CcaModel penalized = fit(d, 2, l1_penalty(0.0, 4, 3), tight);
  CcaModel closed = fit_low_dim(d, 2);
  CHECK(procrustes_distance(penalized.u, closed.u) < 1e-5);
  CHECK(procrustes_distance(penalized.v, closed.v) < 1e-5);
  CHECK((penalized.lambda - closed.lambda).norm() < 1e-5);
}

TEST_CASE("both routes agree with the brute-force classical CCA oracle") {
  Dataset d = gaussian_dataset(400, 5, 4, 13);
  CovarianceModel cov = empirical_covariances(d, true);
  oracle::ClassicalCca ref =
      oracle::classical_cca(cov.sigma_x, cov.sigma_xy, cov.sigma_y, 2);
  CcaModel closed = fit_low_dim(d, 2);
  CHECK(procrustes_distance(closed.u, ref.u) < 1e-6);
  CHECK(procrustes_distance(closed.v, ref.v) < 1e-6);
  CHECK((closed.lambda - ref.corr).norm() < 1e-8);
}

TEST_CASE("fit_low_dim identity covariances give b_hat = sigma_xy") {
  const Index n = 8;
  Eigen::HouseholderQR<Matrix> qr(oracle::random_gaussian(n, n, 19));
  Matrix h = Matrix(qr.householderQ()) * std::sqrt(static_cast<double>(n));
  Dataset d;
  d.x = h.leftCols(3);
  d.y = h.rightCols(2) + 0.5 * d.x.leftCols(2);
  CcaModel model = fit_low_dim(d, 2, false);
  CovarianceModel cov = empirical_covariances(d, false);
  CHECK((cov.sigma_x - Matrix::Identity(3, 3)).norm() < 1e-10);
  CHECK((model.b_hat - oracle::closed_form_b(cov.sigma_x, cov.sigma_xy,
                                             cov.sigma_y)).norm() < 1e-8);
}

TEST_CASE("perfect correlation construction") {
  Dataset d;
  d.x = oracle::random_gaussian(2000, 3, 23);
  d.y = d.x;
  CcaModel model = fit_low_dim(d, 1);
  CHECK(model.lambda[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(procrustes_distance(model.u, model.v) < 1e-6);
  auto [xu, yv] = canonical_variates(model, d);
  Vector a = xu.col(0).array() - xu.col(0).mean();
  Vector b = yv.col(0).array() - yv.col(0).mean();
  CHECK(a.dot(b) / (a.norm() * b.norm()) > 0.99);
}

TEST_CASE("fit_low_dim is consistent on synthetic ground truth") {
  SyntheticSpec spec;
  spec.n = 5000;
  spec.p = 10;
  spec.q = 10;
  spec.r = 2;
  spec.s_u = 5;
  spec.s_v = 5;
  spec.signal = 0.9;
  spec.p1 = 6;
  spec.r_pca = 3;
  spec.seed = 29;
  GroundTruth truth = build_model(spec);
  Dataset d = sample_dataset(truth, spec.n, 30);
  CcaModel model = fit_low_dim(d, 2);
  CHECK(procrustes_distance(model.u, truth.u_star) < 0.1);
}

TEST_CASE("normalization identity holds") {
  Dataset d = gaussian_dataset(200, 5, 4, 31);
  CovarianceModel cov = empirical_covariances(d, true);
  for (double w : {0.0, 0.01}) {
    CcaModel model = fit(d, 2, l1_penalty(w, 5, 4), AdmmConfig{});
    if (model.effective_rank_reduced) continue;
    CHECK((model.u.transpose() * cov.sigma_x * model.u -
           Matrix::Identity(model.rank, model.rank)).norm() <= 1e-6);
    CHECK((model.v.transpose() * cov.sigma_y * model.v -
           Matrix::Identity(model.rank, model.rank)).norm() <= 1e-6);
  }
  CcaModel closed = fit_low_dim(d, 2);
  CHECK((closed.u.transpose() * cov.sigma_x * closed.u -
         Matrix::Identity(2, 2)).norm() <= 1e-8);
}

TEST_CASE("sparsity inheritance from b_hat") {
  SyntheticSpec spec;
  spec.n = 300;
  spec.p = 20;
  spec.q = 20;
  spec.r = 2;
  spec.s_u = 4;
  spec.s_v = 4;
  spec.signal = 0.9;
  spec.p1 = 10;
  spec.r_pca = 3;
  spec.seed = 37;
  GroundTruth truth = build_model(spec);
  Dataset d = sample_dataset(truth, spec.n, 38);
  const double w = theoretical_penalty(spec.n, spec.p, spec.q, 0.5);
  CcaModel model = fit(d, 2, l1_penalty(w, 20, 20), AdmmConfig{});
  for (Index i = 0; i < 20; ++i) {
    if (model.b_hat.row(i).norm() == 0.0) CHECK(model.u.row(i).norm() == 0.0);
    if (model.b_hat.col(i).norm() == 0.0) CHECK(model.v.row(i).norm() == 0.0);
  }
}

TEST_CASE("unpenalized low-dim lambdas stay in [0, 1]") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    Dataset d = gaussian_dataset(150, 4, 4, seed * 7);
    CcaModel model = fit_low_dim(d, 3);
    CHECK(model.lambda.minCoeff() >= 0.0);
    CHECK(model.lambda.maxCoeff() <= 1.0 + 1e-8);
  }
}

TEST_CASE("canonical variates") {
  Dataset d = gaussian_dataset(50, 4, 3, 47);
  CcaModel model = fit_low_dim(d, 2, false);

  // coordinate projection
  CcaModel coord = model;
  coord.u = Matrix::Zero(4, 1);
  coord.u(2, 0) = 1.0;
  coord.v = Matrix::Zero(3, 1);
  coord.v(0, 0) = 1.0;
  auto [xu, yv] = canonical_variates(coord, d);
  CHECK((xu.col(0) - d.x.col(2)).norm() == 0.0);

  // row permutation equivariance
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(50);
  perm.setIdentity();
  std::mt19937_64 rng(3);
  std::shuffle(perm.indices().data(), perm.indices().data() + 50, rng);
  Dataset permuted;
  permuted.x = perm * d.x;
  permuted.y = perm * d.y;
  auto [pxu, pyv] = canonical_variates(model, permuted);
  auto [oxu, oyv] = canonical_variates(model, d);
  CHECK((pxu - perm * oxu).norm() == 0.0);
  CHECK((pyv - perm * oyv).norm() == 0.0);

  Dataset wrong;
  wrong.x = oracle::random_gaussian(10, 5, 1);
  wrong.y = oracle::random_gaussian(10, 3, 2);
  CHECK_THROWS_AS(canonical_variates(model, wrong), InvalidData);
}
