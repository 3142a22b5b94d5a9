#pragma once

#include <utility>

#include "gwstat/rng.hpp"
#include "gwstat/symmat.hpp"

namespace gwstat {

/// Gaussian measure N(mean, cov) with a full-rank covariance.
struct GaussianMeasure {
  GaussianMeasure(Vector mean_in, SpdMatrix cov_in)
      : mean(std::move(mean_in)), cov(std::move(cov_in)) {
    if (mean.size() != cov.dim())
      throw InvalidInput("GaussianMeasure: mean and covariance dimensions differ");
  }

  int dim() const { return static_cast<int>(mean.size()); }

  Vector mean;
  SpdMatrix cov;
};

/// i.i.d. observations, one per row.
class SampleSet {
 public:
  explicit SampleSet(Matrix rows);

  int n() const { return static_cast<int>(rows_.rows()); }
  int dim() const { return static_cast<int>(rows_.cols()); }
  const Matrix& rows() const { return rows_; }

 private:
  Matrix rows_;
};

/// n i.i.d. draws from P via mean + cov^{1/2} z.
SampleSet sample_gaussian(const GaussianMeasure& p, int n, Rng rng);

/// n i.i.d. draws from a multivariate t with dof >= 2 (so second moments
/// exist); the covariance of the result is scale * dof/(dof-2).
SampleSet sample_multivariate_t(const Vector& mean, const SpdMatrix& scale,
                                double dof, int n, Rng rng);

}  // namespace gwstat
