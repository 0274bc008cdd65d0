#include <doctest.h>

#include <cmath>

#include "eccar/rrr_solver.hpp"
#include "support/oracles.hpp"

using namespace eccar;

namespace {

CovarianceModel make_cov(const Matrix& sx, const Matrix& sy, const Matrix& sxy,
                         Index n) {
  CovarianceModel cov;
  cov.sigma_x = sx;
  cov.sigma_y = sy;
  cov.sigma_xy = sxy;
  cov.eig_x = psd_eigendecomposition(sx);
  cov.eig_y = psd_eigendecomposition(sy);
  cov.n_samples = n;
  return cov;
}

CovarianceModel random_cov(Index p, Index q, Index n, std::uint64_t seed) {
  Matrix ax = oracle::random_gaussian(p + 2, p, seed);
  Matrix ay = oracle::random_gaussian(q + 2, q, seed + 1);
  Matrix sx = (ax.transpose() * ax) / (p + 2.0) + 0.5 * Matrix::Identity(p, p);
  Matrix sy = (ay.transpose() * ay) / (q + 2.0) + 0.5 * Matrix::Identity(q, q);
  Matrix sxy = 0.3 * oracle::random_gaussian(p, q, seed + 2);
  return make_cov(sx, sy, sxy, n);
}

PenaltySpec l1_penalty(double w, Index p, Index q) {
  return PenaltySpec{w, elementwise_partition(static_cast<int>(p),
                                              static_cast<int>(q))};
}

}  // namespace

TEST_CASE("theoretical penalty scalar values") {
  CHECK(theoretical_penalty(400, 200, 200, 1.0) ==
        doctest::Approx(std::sqrt(std::log(400.0) / 400.0)).epsilon(1e-12));
  CHECK(theoretical_penalty(400, 200, 200, 1.0) == doctest::Approx(0.1223873).epsilon(1e-5));
  CHECK(theoretical_penalty(100, 5, 5, 0.0) == 0.0);
  CHECK(theoretical_penalty(1000000, 1, 1, 1.0) == doctest::Approx(8.3255e-4).epsilon(1e-4));
  CHECK_THROWS_AS(theoretical_penalty(10, 1, 0, 1.0), InvalidDimensions);
}

TEST_CASE("b_update scalar case") {
  CovarianceModel cov = make_cov(Matrix::Constant(1, 1, 2.0),
                                 Matrix::Constant(1, 1, 3.0),
                                 Matrix::Constant(1, 1, 7.0), 10);
  Matrix z = Matrix::Zero(1, 1), h = Matrix::Zero(1, 1);
  Matrix b = b_update(cov, z, h, 1.0);
  CHECK(b(0, 0) == doctest::Approx(1.0));  // 7 / (2*3 + 1)
}

TEST_CASE("b_update with identity covariances") {
  CovarianceModel cov = make_cov(Matrix::Identity(3, 3), Matrix::Identity(2, 2),
                                 oracle::random_gaussian(3, 2, 4), 10);
  Matrix z = Matrix::Zero(3, 2), h = Matrix::Zero(3, 2);
  const double step = 0.7;
  Matrix b = b_update(cov, z, h, step);
  CHECK((b - cov.sigma_xy / (1.0 + step)).norm() < 1e-12);
}

TEST_CASE("b_update satisfies the linear system") {
  CovarianceModel cov = random_cov(3, 2, 20, 17);
  Matrix z = oracle::random_gaussian(3, 2, 5);
  Matrix h = oracle::random_gaussian(3, 2, 6);
  const double step = 1.3;
  Matrix b = b_update(cov, z, h, step);
  Matrix rhs = cov.sigma_xy + step * (z - h);
  Matrix residual = cov.sigma_x * b * cov.sigma_y + step * b - rhs;
  CHECK(residual.norm() <= 1e-8 * (1.0 + rhs.norm()));
}

TEST_CASE("b_update with thin Gram-trick factors") {
  // n < p: sigma_x is rank deficient and the eigenbasis is thin
  Matrix x = oracle::random_gaussian(4, 8, 31);
  Matrix y = oracle::random_gaussian(4, 3, 32);
  Dataset d{x, y};
  CovarianceModel cov = empirical_covariances(d, false);
  CHECK(cov.eig_x.basis.cols() == 4);
  Matrix z = oracle::random_gaussian(8, 3, 33);
  Matrix h = oracle::random_gaussian(8, 3, 34);
  Matrix b = b_update(cov, z, h, 0.9);
  Matrix rhs = cov.sigma_xy + 0.9 * (z - h);
  Matrix residual = cov.sigma_x * b * cov.sigma_y + 0.9 * b - rhs;
  CHECK(residual.norm() <= 1e-8 * (1.0 + rhs.norm()));
}

TEST_CASE("b_update rejects non-positive step") {
  CovarianceModel cov = random_cov(2, 2, 10, 3);
  Matrix z = Matrix::Zero(2, 2);
  CHECK_THROWS_AS(b_update(cov, z, z, 0.0), InvalidConfig);
}

TEST_CASE("objective fixed values") {
  CovarianceModel cov = random_cov(3, 2, 8, 23);
  CHECK(objective(Matrix::Zero(3, 2), cov, l1_penalty(0.7, 3, 2)) ==
        doctest::Approx(4.0));  // n/2

  CovarianceModel scalar = make_cov(Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                                    Matrix::Constant(1, 1, 0.5), 2);
  CHECK(objective(Matrix::Constant(1, 1, 0.5), scalar, l1_penalty(0.0, 1, 1)) ==
        doctest::Approx(0.875));
}

TEST_CASE("objective agrees with the data-space residual form") {
  Dataset d;
  d.x = oracle::random_gaussian(5, 3, 41);
  d.y = oracle::random_gaussian(5, 2, 42);
  CovarianceModel cov = empirical_covariances(d, false);
  Matrix b = oracle::random_gaussian(3, 2, 43);
  PenaltySpec penalty = l1_penalty(0.4, 3, 2);
  const double via_cov = objective(b, cov, penalty);
  const Matrix residual = (d.x * b * d.y.transpose()) / 5.0 - Matrix::Identity(5, 5);
  const double direct =
      0.5 * residual.squaredNorm() + penalty.weight * b.cwiseAbs().sum();
  CHECK(via_cov == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("admm with zero weight matches the closed form") {
  Dataset d;
  d.x = oracle::random_gaussian(60, 4, 51);
  d.y = oracle::random_gaussian(60, 3, 52);
  CovarianceModel cov = empirical_covariances(d, true);
  auto [est, report] = admm_fit(cov, l1_penalty(0.0, 4, 3), AdmmConfig{});
  CHECK(report.converged);
  Matrix oracle_b = oracle::closed_form_b(cov.sigma_x, cov.sigma_xy, cov.sigma_y);
  CHECK((est.b_hat - oracle_b).norm() <= 1e-4 * oracle_b.norm());
}

TEST_CASE("admm over-penalized returns exact zero") {
  CovarianceModel cov = random_cov(4, 3, 30, 61);
  const double w = cov.sigma_xy.cwiseAbs().maxCoeff() * 1.5;
  auto [est, report] = admm_fit(cov, l1_penalty(w, 4, 3), AdmmConfig{});
  CHECK(est.b_hat.norm() == 0.0);
  CHECK(kkt_violation(est, cov, l1_penalty(w, 4, 3)) == 0.0);
}

TEST_CASE("admm with zero cross covariance returns zero") {
  CovarianceModel cov = random_cov(3, 3, 30, 71);
  cov.sigma_xy.setZero();
  for (double w : {0.0, 0.2}) {
    auto [est, report] = admm_fit(cov, l1_penalty(w, 3, 3), AdmmConfig{});
    CHECK(est.b_hat.norm() == 0.0);
  }
}

TEST_CASE("kkt violation at the unpenalized optimum") {
  CovarianceModel cov = random_cov(4, 4, 40, 81);
  CoefficientEstimate est;
  est.b_hat = oracle::closed_form_b(cov.sigma_x, cov.sigma_xy, cov.sigma_y);
  CHECK(kkt_violation(est, cov, l1_penalty(0.0, 4, 4)) <= 1e-8);
}

TEST_CASE("admm result passes the independent proximal-gradient check") {
  for (std::uint64_t seed : {7u, 8u}) {
    CovarianceModel cov = random_cov(5, 4, 50, seed);
    const double w = 0.05;
    PenaltySpec penalty = l1_penalty(w, 5, 4);
    auto [est, report] = admm_fit(cov, penalty, AdmmConfig{});
    CHECK(report.converged);
    CHECK(report.kkt_violation <= 1e-3 * (1.0 + w));
    Matrix ref = oracle::ista_reference(cov.sigma_x, cov.sigma_xy, cov.sigma_y,
                                        penalty.partition, w);
    CHECK(objective(est.b_hat, cov, penalty) <=
          objective(ref, cov, penalty) + 1e-5);
  }
}

TEST_CASE("group-penalized admm agrees with the reference solver") {
  CovarianceModel cov = random_cov(6, 6, 50, 91);
  GroupPartition blocks = block_partition(6, 6, 2, 3);
  PenaltySpec penalty{0.04, blocks};
  auto [est, report] = admm_fit(cov, penalty, AdmmConfig{});
  CHECK(report.converged);
  CHECK(report.kkt_violation <= 1e-3 * (1.0 + penalty.weight));
  Matrix ref = oracle::ista_reference(cov.sigma_x, cov.sigma_xy, cov.sigma_y,
                                      blocks, penalty.weight);
  CHECK(objective(est.b_hat, cov, penalty) <=
        objective(ref, cov, penalty) + 1e-5);
}

TEST_CASE("transpose symmetry of the l1 fit") {
  CovarianceModel cov = random_cov(4, 5, 40, 101);
  PenaltySpec penalty = l1_penalty(0.03, 4, 5);
  auto [fwd, r1] = admm_fit(cov, penalty, AdmmConfig{});

  CovarianceModel swapped = make_cov(cov.sigma_y, cov.sigma_x,
                                     cov.sigma_xy.transpose(), cov.n_samples);
  auto [bwd, r2] = admm_fit(swapped, l1_penalty(0.03, 5, 4), AdmmConfig{});
  const double tol = 2.0 * (r1.primal_residual + r2.primal_residual + 1e-6);
  CHECK((fwd.b_hat - bwd.b_hat.transpose()).norm() <= tol);
}

TEST_CASE("feature permutation equivariance is exact") {
  CovarianceModel cov = random_cov(4, 3, 40, 111);
  PenaltySpec penalty = l1_penalty(0.02, 4, 3);
  auto [base, rep] = admm_fit(cov, penalty, AdmmConfig{});

  Eigen::PermutationMatrix<Eigen::Dynamic> perm(4);
  perm.indices() << 2, 0, 3, 1;
  CovarianceModel permuted = make_cov(perm * cov.sigma_x * perm.transpose(),
                                      cov.sigma_y, perm * cov.sigma_xy,
                                      cov.n_samples);
  auto [moved, rep2] = admm_fit(permuted, penalty, AdmmConfig{});
  // The zero pattern moves with the permutation exactly; values agree up to
  // eigendecomposition roundoff.
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 3; ++j)
      CHECK((moved.b_hat(perm.indices()[i], j) == 0.0) ==
            (base.b_hat(i, j) == 0.0));
  CHECK((moved.b_hat - perm * base.b_hat).norm() <=
        1e-12 * (1.0 + base.b_hat.norm()));
}

TEST_CASE("reported zeros are exact zeros") {
  CovarianceModel cov = random_cov(6, 6, 60, 121);
  auto [est, report] = admm_fit(cov, l1_penalty(0.15, 6, 6), AdmmConfig{});
  int exact_zeros = 0;
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j)
      if (est.b_hat(i, j) == 0.0) ++exact_zeros;
  CHECK(exact_zeros > 0);  // some shrinkage happened at this weight
}

TEST_CASE("objective is locally minimal on a perturbation grid") {
  CovarianceModel cov = random_cov(4, 4, 40, 131);
  PenaltySpec penalty = l1_penalty(0.05, 4, 4);
  AdmmConfig cfg;
  cfg.eps_abs = 1e-9;
  cfg.eps_rel = 1e-8;
  cfg.max_iter = 20000;
  auto [est, report] = admm_fit(cov, penalty, cfg);
  const double base = objective(est.b_hat, cov, penalty);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      for (double delta : {-1e-3, 1e-3, -1e-4, 1e-4}) {
        Matrix b = est.b_hat;
        b(i, j) += delta;
        CHECK(base <= objective(b, cov, penalty) + 1e-6);
      }
}
