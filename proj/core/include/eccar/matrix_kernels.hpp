#pragma once

#include "eccar/group_structures.hpp"
#include "eccar/types.hpp"

namespace eccar {

/// Eigendecomposition carrier: basis has orthonormal columns, eigenvalues are
/// nonnegative and sorted descending. When built via the Gram trick from an
/// n x d block with n < d, only the (at most n) nonzero eigenpairs are kept.
struct SpectralFactor {
  Matrix basis;        // d x k, orthonormal columns
  Vector eigenvalues;  // k, descending, >= 0
  Index dim = 0;       // d
};

struct CovarianceModel {
  Matrix sigma_x;   // p x p, symmetric PSD
  Matrix sigma_y;   // q x q, symmetric PSD
  Matrix sigma_xy;  // p x q
  SpectralFactor eig_x;
  SpectralFactor eig_y;
  Index n_samples = 0;

  Index p() const { return sigma_x.rows(); }
  Index q() const { return sigma_y.rows(); }
};

/// Empirical covariances XtX/n, YtY/n, XtY/n with optional column-mean
/// centering, plus cached spectral factors of sigma_x and sigma_y.
CovarianceModel empirical_covariances(const Dataset& data, bool center);

/// Direct symmetric eigendecomposition (input symmetrized defensively).
/// Small negative eigenvalues from roundoff are clamped to zero; anything
/// below -1e-10 * lambda_max raises InvalidData.
SpectralFactor psd_eigendecomposition(const Matrix& s);

/// Gram-trick factorization of (1/n) XtX via the thin SVD of X/sqrt(n).
/// Matches psd_eigendecomposition when n >= d, and keeps the cost at
/// O(d^2 (d ^ n)) when n < d.
SpectralFactor gram_eigendecomposition(const Matrix& data_block);

/// basis * diag(sqrt(eigenvalues)) * basis^T.
Matrix psd_sqrt(const SpectralFactor& f);

/// Entrywise (1 - kappa/|m_ij|)_+ * m_ij.
Matrix soft_threshold(const Matrix& m, double kappa);

/// Per group g: (1 - sqrt(T_g) * kappa / ||m_g||_F)_+ * m_g.
Matrix group_threshold(const Matrix& m, double kappa, const GroupPartition& partition);

struct TruncatedSvd {
  Matrix u;      // p x r
  Vector sigma;  // r, descending
  Matrix v;      // q x r
};

/// Rank-r SVD with a deterministic sign convention: the largest-magnitude
/// entry of each left singular vector is made nonnegative.
TruncatedSvd truncated_svd(const Matrix& m, Index r);

}  // namespace eccar
