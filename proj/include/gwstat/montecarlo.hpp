#pragma once

#include <cstdint>
#include <vector>

#include "gwstat/gaussian.hpp"
#include "gwstat/limitlaw.hpp"

namespace gwstat::mc {

/// Studentized one-sample statistics sqrt(n)(gw_hat - gw2)/upsilon over
/// independent replicates; asymptotically standard normal when P != Q.
std::vector<double> one_sample_clt_stats(const GaussianMeasure& p,
                                         const GaussianMeasure& q, int n,
                                         std::size_t replicates, Rng rng);

/// Two-sample analogue with rate sqrt(nm/(n+m)) and weight a = n/(n+m).
std::vector<double> two_sample_clt_stats(const GaussianMeasure& p,
                                         const GaussianMeasure& q, int n, int m,
                                         std::size_t replicates, Rng rng);

/// Draws of the second-order statistic at P = Q: n * gw_hat against P itself
/// (oneSample) or n * gw_hat2 between two independent samples of size n
/// (twoSample).
std::vector<double> null_statistic_draws(const GaussianMeasure& p, int n,
                                         std::size_t replicates, LimitMode mode,
                                         Rng rng);

double ks_vs_standard_normal(std::vector<double> draws);
double ks_between(std::vector<double> a, std::vector<double> b);

/// One row of the variance certification table.
struct VarianceCertRow {
  int dim = 0;
  int config = 0;
  LimitMode mode = LimitMode::oneSample;
  double a = 0.5;
  double formula = 0.0;
  double oracle = 0.0;
  double std_err = 0.0;
  bool pass = false;
  // Per-block diagnostics, filled when the row fails: mean directions only,
  // first-covariance directions only, second-covariance directions only.
  std::vector<double> block_formula;
  std::vector<double> block_oracle;
  std::vector<double> block_std_err;
};

/// Certifies both closed-form variances against the Monte Carlo oracle on
/// random configurations (random means, random SPD covariances with
/// eigenvalues in [0.4, 2.5], random weight a in [0.15, 0.85]).
std::vector<VarianceCertRow> certify_variances(const std::vector<int>& dims,
                                               int configs_per_dim,
                                               std::size_t n_draws,
                                               std::uint64_t seed,
                                               double tolerance_std_errs = 4.0);

struct D1CrossCheck {
  double gw_hat_value = 0.0;
  double quantile_value = 0.0;  // empirical-quantile estimate of the distance
  double rel_gap = 0.0;
};

/// d = 1 cross-check: the plug-in Gaussian estimate versus the empirical
/// quantile formula with the reference quantiles evaluated at midpoints.
D1CrossCheck d1_cross_check(const GaussianMeasure& p, const GaussianMeasure& q,
                            int n, Rng rng);

/// Random orthogonal matrix (Haar via QR sign fix).
Matrix random_orthogonal(int dim, Rng& rng);

/// Random SPD matrix with eigenvalues uniform in [lo, hi].
SpdMatrix random_spd(int dim, Rng& rng, double lo = 0.4, double hi = 2.5);

}  // namespace gwstat::mc
