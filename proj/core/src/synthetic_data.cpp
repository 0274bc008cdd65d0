#include "eccar/synthetic_data.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace eccar {

void SyntheticSpec::validate() const {
  if (n < 2 || p < 1 || q < 1) throw InvalidData("synthetic spec: bad n/p/q");
  if (r < 1 || r > std::min(s_u, s_v))
    throw InvalidData("synthetic spec: need 1 <= r <= min(s_u, s_v)");
  if (s_u > p || s_v > q)
    throw InvalidData("synthetic spec: support sizes exceed dimensions");
  if (signal < 0.0 || signal >= 1.0)
    throw InvalidSignal("synthetic spec: signal must lie in [0, 1)");
  if (r_pca < 1 || r_pca > p1 || p1 > p || p1 > q)
    throw InvalidData("synthetic spec: need r_pca <= p1 <= min(p, q)");
}

namespace {

Matrix random_orthonormal(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return Matrix(qr.householderQ()) .leftCols(cols);
}

// Sparse-PCA block: U U^T + I on the first p1 coordinates, identity elsewhere.
Matrix block_covariance(int d, int p1, int r_pca, std::mt19937_64& rng) {
  Matrix u = random_orthonormal(p1, r_pca, rng);
  Matrix sigma = Matrix::Identity(d, d);
  sigma.topLeftCorner(p1, p1) += u * u.transpose();
  return sigma;
}

std::vector<int> draw_support(int d, int s, std::mt19937_64& rng) {
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(s);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Rows on the support uniform in [-1, 1], then normalized by the symmetric
// inverse square root of the restriction U^T Sigma U.
Matrix sparse_directions(const Matrix& sigma, const std::vector<int>& support,
                         int r, std::mt19937_64& rng) {
  const int d = static_cast<int>(sigma.rows());
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (int attempt = 0; attempt < 10; ++attempt) {
    Matrix u = Matrix::Zero(d, r);
    for (int i : support)
      for (int j = 0; j < r; ++j) u(i, j) = uniform(rng);
    Matrix gram = u.transpose() * sigma * u;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff())
      continue;
    Matrix inv_sqrt = es.eigenvectors() *
                      es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                      es.eigenvectors().transpose();
    return u * inv_sqrt;
  }
  throw NumericalFailure("synthetic: direction restriction rank-deficient after 10 resamples");
}

}  // namespace

GroundTruth build_model(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  GroundTruth truth;
  truth.sigma_x = block_covariance(spec.p, spec.p1, spec.r_pca, rng);
  truth.sigma_y = block_covariance(spec.q, spec.p1, spec.r_pca, rng);

  truth.support_u = draw_support(spec.p, spec.s_u, rng);
  truth.support_v = draw_support(spec.q, spec.s_v, rng);
  truth.u_star = sparse_directions(truth.sigma_x, truth.support_u, spec.r, rng);
  truth.v_star = sparse_directions(truth.sigma_y, truth.support_v, spec.r, rng);

  truth.lambda_star = Vector::Constant(spec.r, spec.signal);
  truth.b_star =
      truth.u_star * truth.lambda_star.asDiagonal() * truth.v_star.transpose();
  truth.sigma_xy = truth.sigma_x * truth.b_star * truth.sigma_y;

  const Index p = spec.p, q = spec.q;
  Matrix joint(p + q, p + q);
  joint.topLeftCorner(p, p) = truth.sigma_x;
  joint.topRightCorner(p, q) = truth.sigma_xy;
  joint.bottomLeftCorner(q, p) = truth.sigma_xy.transpose();
  joint.bottomRightCorner(q, q) = truth.sigma_y;
  Eigen::LLT<Matrix> llt(joint);
  if (llt.info() != Eigen::Success)
    throw InvalidSignal("synthetic: joint covariance is not positive definite");
  truth.joint_chol = llt.matrixL();
  return truth;
}

Dataset sample_dataset(const GroundTruth& truth, int n, std::uint64_t seed) {
  if (n < 2) throw InvalidData("sample_dataset: need n >= 2");
  const Index p = truth.p(), q = truth.q();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, p + q);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p + q; ++j) g(i, j) = normal(rng);
  Matrix z = g * truth.joint_chol.transpose();  // rows are L * g_i
  Dataset data;
  data.x = z.leftCols(p);
  data.y = z.rightCols(q);
  return data;
}

}  // namespace eccar
