#include "gwstat/gaussian.hpp"

#include <cmath>

namespace gwstat {

SampleSet::SampleSet(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1)
    throw InvalidInput("SampleSet: need at least one observation and one column");
  if (!rows_.allFinite())
    throw InvalidInput("SampleSet: non-finite entries");
}

SampleSet sample_gaussian(const GaussianMeasure& p, int n, Rng rng) {
  if (n < 1) throw InvalidInput("sample_gaussian: n must be >= 1");
  const int d = p.dim();
  const Matrix root = spd_sqrt(p.cov).mat();
  Matrix z(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = rng.normal();
  Matrix rows = z * root;  // root is symmetric
  rows.rowwise() += p.mean.transpose();
  return SampleSet(std::move(rows));
}

SampleSet sample_multivariate_t(const Vector& mean, const SpdMatrix& scale,
                                double dof, int n, Rng rng) {
  if (dof < 2.0)
    throw InvalidInput("sample_multivariate_t: dof must be >= 2");
  if (n < 1) throw InvalidInput("sample_multivariate_t: n must be >= 1");
  if (mean.size() != scale.dim())
    throw InvalidInput("sample_multivariate_t: mean/scale dimensions differ");
  const int d = scale.dim();
  const Matrix root = spd_sqrt(scale).mat();
  Matrix rows(n, d);
  Vector z(d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) z[j] = rng.normal();
    const double w = sample_chi_squared(dof, rng);
    rows.row(i) =
        (mean + std::sqrt(dof / w) * (root * z)).transpose();
  }
  return SampleSet(std::move(rows));
}

}  // namespace gwstat
