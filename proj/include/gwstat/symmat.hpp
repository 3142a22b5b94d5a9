#pragma once

#include <Eigen/Dense>
#include <utility>

#include "gwstat/errors.hpp"
#include "gwstat/rng.hpp"

namespace gwstat {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Both triangles are kept exactly equal; the only
/// mutating access writes (i,j) and (j,i) together.
class SymMatrix {
 public:
  explicit SymMatrix(int dim);

  /// Wraps (m + m^t)/2 so the symmetry is exact entrywise.
  static SymMatrix symmetrized(const Matrix& m);

  /// Requires m to already be symmetric with finite entries.
  static SymMatrix from_symmetric(const Matrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  double trace() const { return m_.trace(); }

 private:
  explicit SymMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Spectral decomposition with eigenvalues sorted descending and repeated
/// eigenvalues listed by multiplicity. Deterministic for a fixed input: each
/// eigenvector's first nonzero component is made positive, and exact ties
/// are ordered by lexicographic comparison of their eigenvectors.
struct EigenDecomposition {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // orthonormal columns; col(i) pairs with eigenvalues[i]

  int dim() const { return static_cast<int>(eigenvalues.size()); }

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }

  /// V f(Lambda) V^t for an entrywise function of the eigenvalues.
  template <typename Fn>
  Matrix apply(Fn&& f) const {
    Vector fv(eigenvalues.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) fv[i] = f(eigenvalues[i]);
    return eigenvectors * fv.asDiagonal() * eigenvectors.transpose();
  }
};

EigenDecomposition symmetric_eig(const SymMatrix& a);

/// Symmetric positive definite matrix. Construction runs the spectral
/// decomposition once and caches it; anything with
/// min eigenvalue <= 1e-10 * max eigenvalue is rejected as NotSpd.
class SpdMatrix {
 public:
  static SpdMatrix from_sym(const SymMatrix& a);
  static SpdMatrix from_matrix(const Matrix& m);  // symmetrizes, then checks
  static SpdMatrix identity(int dim);

  int dim() const { return base_.dim(); }
  const SymMatrix& sym() const { return base_; }
  const Matrix& mat() const { return base_.mat(); }
  const EigenDecomposition& eig() const { return eig_; }
  double min_eigenvalue() const { return min_eigenvalue_; }
  double trace() const { return base_.trace(); }

 private:
  SpdMatrix(SymMatrix base, EigenDecomposition eig, double min_eigenvalue)
      : base_(std::move(base)),
        eig_(std::move(eig)),
        min_eigenvalue_(min_eigenvalue) {}

  friend SpdMatrix spd_sqrt(const SpdMatrix& a);
  friend SpdMatrix spd_inv_sqrt(const SpdMatrix& a);

  SymMatrix base_;
  EigenDecomposition eig_;
  double min_eigenvalue_;
};

/// Spectral square root; result * result reconstructs the input to 1e-10
/// relative Frobenius error.
SpdMatrix spd_sqrt(const SpdMatrix& a);

/// Spectral inverse square root.
SpdMatrix spd_inv_sqrt(const SpdMatrix& a);

/// tr(AB) for conformable rectangular matrices, computed without forming AB.
double trace_product(const Matrix& a, const Matrix& b);

/// Gaussian symmetric matrix with independent upper-triangle entries,
/// variance 2 on the diagonal and 1 off it.
SymMatrix sample_wigner(int dim, Rng rng);

namespace detail {
// In-place variant for hot loops; advances the caller's generator.
void fill_wigner(Matrix& h, Rng& rng);
}  // namespace detail

}  // namespace gwstat
