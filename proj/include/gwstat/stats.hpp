#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gwstat {

/// Pairwise (cascade) summation. Deterministic for a fixed input order and
/// accurate enough for million-draw Monte Carlo reductions.
double pairwise_sum(std::span<const double> xs);

double mean(std::span<const double> xs);

/// Unbiased sample variance (1/(n-1)); n >= 2.
double sample_variance(std::span<const double> xs);

/// k-th central moment (1/n normalization).
double central_moment(std::span<const double> xs, int order);

/// Standard error of the unbiased sample variance,
/// sqrt((m4 - (n-3)/(n-1) s^4) / n).
double variance_standard_error(std::span<const double> xs);

double normal_cdf(double x);

/// Inverse standard normal CDF, accurate to ~1e-15 after one Halley step.
double normal_quantile(double p);

/// Lower order-statistic quantile: the ceil(p*n)-th smallest value of a
/// sorted sample. No interpolation.
double quantile_lower(std::span<const double> sorted, double p);

/// Kolmogorov-Smirnov distance between a sorted sample and a reference CDF.
double ks_distance(std::span<const double> sorted,
                   const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance (both inputs sorted ascending).
double ks_distance_two_sample(std::span<const double> sorted_a,
                              std::span<const double> sorted_b);

std::vector<double> sorted_copy(std::span<const double> xs);

}  // namespace gwstat
