#include "gwstat/gw.hpp"

#include <cmath>

namespace gwstat {

namespace {

// Eigenvalues of the symmetrized inner product S Xi S. Values in
// (-tol, 0] are round-off near singularity and are clamped; anything more
// negative means the inputs were not SPD.
Vector clamped_inner_eigenvalues(const SpdMatrix& sigma, const SpdMatrix& xi) {
  const Matrix s = spd_sqrt(sigma).mat();
  const SymMatrix inner = SymMatrix::symmetrized(s * xi.mat() * s);
  EigenDecomposition e = symmetric_eig(inner);
  const double scale = std::max(std::abs(e.eigenvalues[0]), 1e-300);
  Vector vals = e.eigenvalues;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0.0) {
      if (vals[i] < -1e-10 * scale)
        throw NotSpd("gw2: inner matrix has a significantly negative eigenvalue");
      vals[i] = 0.0;
    }
  }
  return vals;
}

}  // namespace

double gw2(const GaussianMeasure& p, const GaussianMeasure& q) {
  if (p.dim() != q.dim()) throw InvalidInput("gw2: dimension mismatch");
  const Vector inner = clamped_inner_eigenvalues(p.cov, q.cov);
  const double cross = 2.0 * inner.cwiseSqrt().sum();
  const double value = (p.mean - q.mean).squaredNorm() + p.cov.trace() +
                       q.cov.trace() - cross;
  // The exact value is >= 0; only round-off can push it slightly below.
  return value < 0.0 ? 0.0 : value;
}

GaussianMeasure empirical_gaussian(const SampleSet& s) {
  const int n = s.n();
  const int d = s.dim();
  if (n < d + 1)
    throw DegenerateSample("empirical_gaussian: need at least dim + 1 observations");
  const Vector mu = s.rows().colwise().mean();
  const Matrix centered = s.rows().rowwise() - mu.transpose();
  const Matrix cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  try {
    return GaussianMeasure(mu, SpdMatrix::from_matrix(cov));
  } catch (const NotSpd&) {
    throw DegenerateSample("empirical_gaussian: sample covariance is rank-deficient");
  }
}

double gw_hat(const SampleSet& s, const GaussianMeasure& q) {
  return gw2(empirical_gaussian(s), q);
}

double gw_hat2(const SampleSet& sx, const SampleSet& sy) {
  return gw2(empirical_gaussian(sx), empirical_gaussian(sy));
}

double w2_empirical_1d(std::span<const double> x_sorted,
                       std::span<const double> y_sorted) {
  if (x_sorted.size() != y_sorted.size())
    throw InvalidInput("w2_empirical_1d: samples must have equal length");
  if (x_sorted.empty()) throw InvalidInput("w2_empirical_1d: empty samples");
  for (std::size_t i = 1; i < x_sorted.size(); ++i)
    if (x_sorted[i] < x_sorted[i - 1] || y_sorted[i] < y_sorted[i - 1])
      throw InvalidInput("w2_empirical_1d: inputs must be sorted ascending");
  double acc = 0.0;
  for (std::size_t i = 0; i < x_sorted.size(); ++i) {
    const double d = x_sorted[i] - y_sorted[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x_sorted.size());
}

}  // namespace gwstat
