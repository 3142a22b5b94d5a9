#include "gwstat/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace gwstat {

namespace {

void require_finite(const Matrix& m, const char* who) {
  if (!m.allFinite()) throw InvalidInput(std::string(who) + ": non-finite entries");
}

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw InvalidInput(std::string(who) + ": expected a square matrix, dim >= 1");
}

// First nonzero component positive; "nonzero" is relative to the largest
// component so sign flips stay stable under round-off.
void normalize_sign(Eigen::Ref<Vector> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12 * scale) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

SymMatrix::SymMatrix(int dim) : m_(Matrix::Zero(dim, dim)) {
  if (dim < 1) throw InvalidInput("SymMatrix: dim must be >= 1");
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  require_square(m, "SymMatrix::symmetrized");
  Matrix s(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s(i, i) = m(i, i);
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SymMatrix(std::move(s));
}

SymMatrix SymMatrix::from_symmetric(const Matrix& m) {
  require_square(m, "SymMatrix::from_symmetric");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i))
        throw InvalidInput("SymMatrix::from_symmetric: matrix is not symmetric");
  return SymMatrix(Matrix(m));
}

EigenDecomposition symmetric_eig(const SymMatrix& a) {
  require_finite(a.mat(), "symmetric_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
  if (solver.info() != Eigen::Success)
    throw InvalidInput("symmetric_eig: eigensolver failed to converge");

  const int d = a.dim();
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);

  Matrix vecs = solver.eigenvectors();
  for (int i = 0; i < d; ++i) normalize_sign(vecs.col(i));
  const Vector& vals = solver.eigenvalues();

  // Descending eigenvalues; exact ties ordered by eigenvector lexicographic
  // comparison so the output is a pure function of the input matrix.
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (vals[i] != vals[j]) return vals[i] > vals[j];
    return lex_less(vecs.col(i), vecs.col(j));
  });

  EigenDecomposition e;
  e.eigenvalues.resize(d);
  e.eigenvectors.resize(d, d);
  for (int i = 0; i < d; ++i) {
    e.eigenvalues[i] = vals[order[i]];
    e.eigenvectors.col(i) = vecs.col(order[i]);
  }
  return e;
}

SpdMatrix SpdMatrix::from_sym(const SymMatrix& a) {
  EigenDecomposition e = symmetric_eig(a);
  const double max_ev = e.eigenvalues[0];
  const double min_ev = e.eigenvalues[e.dim() - 1];
  if (!(max_ev > 0.0) || min_ev <= 1e-10 * max_ev)
    throw NotSpd("SpdMatrix: matrix is not positive definite within tolerance");
  return SpdMatrix(a, std::move(e), min_ev);
}

SpdMatrix SpdMatrix::from_matrix(const Matrix& m) {
  return from_sym(SymMatrix::symmetrized(m));
}

SpdMatrix SpdMatrix::identity(int dim) {
  return from_sym(SymMatrix::from_symmetric(Matrix::Identity(dim, dim)));
}

SpdMatrix spd_sqrt(const SpdMatrix& a) {
  EigenDecomposition e;
  e.eigenvalues = a.eig().eigenvalues.cwiseSqrt();
  e.eigenvectors = a.eig().eigenvectors;
  SymMatrix base = SymMatrix::symmetrized(e.reconstruct());
  const double min_ev = e.eigenvalues[e.dim() - 1];
  return SpdMatrix(std::move(base), std::move(e), min_ev);
}

SpdMatrix spd_inv_sqrt(const SpdMatrix& a) {
  // Inverting reverses the spectral order.
  EigenDecomposition e;
  e.eigenvalues = a.eig().eigenvalues.cwiseSqrt().cwiseInverse().reverse();
  e.eigenvectors = a.eig().eigenvectors.rowwise().reverse();
  SymMatrix base = SymMatrix::symmetrized(e.reconstruct());
  const double min_ev = e.eigenvalues[e.dim() - 1];
  return SpdMatrix(std::move(base), std::move(e), min_ev);
}

double trace_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw InvalidInput("trace_product: dimensions do not conform");
  return a.cwiseProduct(b.transpose()).sum();
}

SymMatrix sample_wigner(int dim, Rng rng) {
  if (dim < 1) throw InvalidInput("sample_wigner: dim must be >= 1");
  Matrix h(dim, dim);
  detail::fill_wigner(h, rng);
  return SymMatrix::from_symmetric(h);
}

namespace detail {

void fill_wigner(Matrix& h, Rng& rng) {
  const Eigen::Index d = h.rows();
  const double sqrt2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    h(i, i) = sqrt2 * rng.normal();
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double v = rng.normal();
      h(i, j) = v;
      h(j, i) = v;
    }
  }
}

}  // namespace detail

}  // namespace gwstat
