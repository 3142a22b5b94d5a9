#include "gwstat/stats.hpp"

#include <algorithm>
#include <cmath>

#include "gwstat/errors.hpp"

namespace gwstat {

namespace {

double pairwise_sum_impl(const double* xs, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += xs[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(xs, half) + pairwise_sum_impl(xs + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> xs) {
  return pairwise_sum_impl(xs.data(), xs.size());
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw InvalidInput("mean: empty sample");
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw InvalidInput("sample_variance: need at least two values");
  const double m = mean(xs);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - m;
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(n - 1);
}

double central_moment(std::span<const double> xs, int order) {
  if (xs.empty()) throw InvalidInput("central_moment: empty sample");
  const double m = mean(xs);
  std::vector<double> pw(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    pw[i] = std::pow(xs[i] - m, order);
  return pairwise_sum(pw) / static_cast<double>(xs.size());
}

double variance_standard_error(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 4)
    throw InvalidInput("variance_standard_error: need at least four values");
  const double s2 = sample_variance(xs);
  const double m4 = central_moment(xs, 4);
  const double var_of_var = (m4 - (n - 3.0) / (n - 1.0) * s2 * s2) / n;
  return std::sqrt(std::max(var_of_var, 0.0));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidInput("normal_quantile: p must be in (0,1)");

  // Acklam's rational approximation, then one Halley refinement.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double quantile_lower(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidInput("quantile_lower: empty sample");
  if (!(p > 0.0 && p < 1.0))
    throw InvalidInput("quantile_lower: p must be in (0,1)");
  const std::size_t n = sorted.size();
  std::size_t k =
      static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n);
  return sorted[k - 1];
}

double ks_distance(std::span<const double> sorted,
                   const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw InvalidInput("ks_distance: empty sample");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_distance_two_sample(std::span<const double> sorted_a,
                              std::span<const double> sorted_b) {
  if (sorted_a.empty() || sorted_b.empty())
    throw InvalidInput("ks_distance_two_sample: empty sample");
  const double na = static_cast<double>(sorted_a.size());
  const double nb = static_cast<double>(sorted_b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sorted_a.size() && j < sorted_b.size()) {
    if (sorted_a[i] <= sorted_b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> out(xs.begin(), xs.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gwstat
