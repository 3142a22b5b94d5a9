#pragma once

#include <span>

#include "gwstat/gaussian.hpp"

namespace gwstat {

/// Squared 2-Wasserstein distance between Gaussian measures:
///   ||mu - nu||^2 + tr(S) + tr(X) - 2 tr[(S^{1/2} X S^{1/2})^{1/2}].
/// Symmetric, nonnegative, zero iff the measures coincide.
double gw2(const GaussianMeasure& p, const GaussianMeasure& q);

/// Fit by sample mean and the unbiased (1/(n-1)) sample covariance.
/// Requires n >= dim + 1 and a full-rank sample covariance.
GaussianMeasure empirical_gaussian(const SampleSet& s);

/// Plug-in estimate gw2(empirical_gaussian(s), q).
double gw_hat(const SampleSet& s, const GaussianMeasure& q);

/// Two-sample plug-in estimate.
double gw_hat2(const SampleSet& sx, const SampleSet& sy);

/// Squared 2-Wasserstein distance between two equal-size one-dimensional
/// empirical distributions: (1/n) sum (x_(i) - y_(i))^2. Inputs must be
/// sorted ascending.
double w2_empirical_1d(std::span<const double> x_sorted,
                       std::span<const double> y_sorted);

}  // namespace gwstat
