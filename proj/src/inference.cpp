#include "gwstat/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gwstat/stats.hpp"

namespace gwstat {

namespace {

double exceedance(const std::vector<double>& draws, double statistic) {
  std::size_t count = 0;
  for (const double z : draws)
    if (z >= statistic) ++count;
  return static_cast<double>(count) / static_cast<double>(draws.size());
}

Matrix resample_rows(const Matrix& rows, std::size_t m, Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(rows.rows());
  Matrix out(static_cast<Eigen::Index>(m), rows.cols());
  for (std::size_t i = 0; i < m; ++i)
    out.row(static_cast<Eigen::Index>(i)) =
        rows.row(static_cast<Eigen::Index>(rng.uniform_below(n)));
  return out;
}

BootstrapDistribution bootstrap_impl(const SampleSet& s,
                                     const GaussianMeasure& q, std::size_t m,
                                     std::size_t b, BootstrapScheme scheme,
                                     Rng rng) {
  if (b < 1) throw InvalidInput("bootstrap: need at least one replicate");
  const double base = gw_hat(s, q);
  const double scale = scheme == BootstrapScheme::nOfN
                           ? std::sqrt(static_cast<double>(m))
                           : static_cast<double>(m);

  BootstrapDistribution out;
  out.scheme = scheme;
  out.m = m;
  out.requested = b;
  out.replicates.reserve(b);
  for (std::size_t rep = 0; rep < b; ++rep) {
    Rng stream = rng.stream(rep);
    const Matrix rows = resample_rows(s.rows(), m, stream);
    try {
      const double star = gw_hat(SampleSet(rows), q);
      out.replicates.push_back(scale * (star - base));
    } catch (const DegenerateSample&) {
      ++out.skipped;
    }
  }
  out.b = out.replicates.size();
  if (out.skipped * 100 > out.requested)
    throw DegenerateSample("bootstrap: more than 1% of resamples were degenerate");
  return out;
}

}  // namespace

ConfidenceInterval ci_one_sample(const SampleSet& s, const GaussianMeasure& q,
                                 double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InvalidInput("ci_one_sample: alpha must be in (0,1]");
  const GaussianMeasure fit = empirical_gaussian(s);
  const double estimate = gw2(fit, q);
  const double var = one_sample_variance(fit, q);
  if (var < kVarianceFloor)
    throw NearNullDegenerate(
        "ci_one_sample: plug-in variance is degenerate; use the second-order "
        "null machinery");
  const double z = alpha == 1.0 ? 0.0 : normal_quantile(1.0 - alpha / 2.0);
  const double se = std::sqrt(var / static_cast<double>(s.n()));
  ConfidenceInterval ci;
  ci.estimate = estimate;
  ci.std_err = se;
  ci.alpha = alpha;
  ci.lower = std::max(0.0, estimate - z * se);
  ci.upper = std::max(0.0, estimate + z * se);
  return ci;
}

ConfidenceInterval ci_two_sample(const SampleSet& sx, const SampleSet& sy,
                                 double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InvalidInput("ci_two_sample: alpha must be in (0,1]");
  const GaussianMeasure fx = empirical_gaussian(sx);
  const GaussianMeasure fy = empirical_gaussian(sy);
  const double n = static_cast<double>(sx.n());
  const double m = static_cast<double>(sy.n());
  const double a = n / (n + m);
  const double estimate = gw2(fx, fy);
  const double var = two_sample_variance(fx, fy, a);
  if (var < kVarianceFloor)
    throw NearNullDegenerate(
        "ci_two_sample: plug-in variance is degenerate; use the second-order "
        "null machinery");
  const double z = alpha == 1.0 ? 0.0 : normal_quantile(1.0 - alpha / 2.0);
  const double rate = std::sqrt(n * m / (n + m));
  const double se = std::sqrt(var) / rate;
  ConfidenceInterval ci;
  ci.estimate = estimate;
  ci.std_err = se;
  ci.alpha = alpha;
  ci.lower = std::max(0.0, estimate - z * se);
  ci.upper = std::max(0.0, estimate + z * se);
  return ci;
}

TestReport test_equality(const SampleSet& s, const GaussianMeasure& q_ref,
                         double alpha, std::size_t null_draws, Rng rng) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInput("test_equality: alpha must be in (0,1)");
  const GaussianMeasure fit = empirical_gaussian(s);
  const double statistic = static_cast<double>(s.n()) * gw2(fit, q_ref);
  const LimitLawSample null_law =
      sample_limit_null(fit, LimitMode::oneSample, null_draws, rng);

  TestReport r;
  r.method = TestMethod::equalityOneSample;
  r.statistic = statistic;
  r.threshold = quantile(null_law, 1.0 - alpha);
  r.p_value = exceedance(null_law.draws, statistic);
  r.alpha = alpha;
  r.decision = statistic >= r.threshold ? Decision::reject : Decision::retain;
  r.n = static_cast<std::size_t>(s.n());
  r.nuisance = "null law sampled at the fitted Gaussian, " +
               std::to_string(null_draws) + " draws";
  return r;
}

TestReport test_equality(const SampleSet& sx, const SampleSet& sy, double alpha,
                         std::size_t null_draws, Rng rng) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInput("test_equality: alpha must be in (0,1)");
  if (sx.dim() != sy.dim())
    throw InvalidInput("test_equality: sample dimensions differ");
  const double n = static_cast<double>(sx.n());
  const double m = static_cast<double>(sy.n());
  const double a = n / (n + m);
  const double statistic = 2.0 * (n * m / (n + m)) * gw_hat2(sx, sy);

  // Pooled fit is the plug-in null.
  Matrix pooled(sx.n() + sy.n(), sx.dim());
  pooled.topRows(sx.n()) = sx.rows();
  pooled.bottomRows(sy.n()) = sy.rows();
  const GaussianMeasure fit = empirical_gaussian(SampleSet(pooled));
  const LimitLawSample null_law =
      sample_limit_null(fit, LimitMode::twoSample, null_draws, rng, a);

  TestReport r;
  r.method = TestMethod::equalityTwoSample;
  r.statistic = statistic;
  r.threshold = quantile(null_law, 1.0 - alpha);
  r.p_value = exceedance(null_law.draws, statistic);
  r.alpha = alpha;
  r.decision = statistic >= r.threshold ? Decision::reject : Decision::retain;
  r.n = static_cast<std::size_t>(sx.n());
  r.m = static_cast<std::size_t>(sy.n());
  r.nuisance = "null law sampled at the pooled fit, " +
               std::to_string(null_draws) + " draws";
  return r;
}

TestReport test_neighborhood(const SampleSet& s, const GaussianMeasure& q,
                             double delta, double alpha) {
  if (!(delta > 0.0)) throw InvalidInput("test_neighborhood: delta must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInput("test_neighborhood: alpha must be in (0,1)");
  const GaussianMeasure fit = empirical_gaussian(s);
  const double estimate = gw2(fit, q);
  const double var = one_sample_variance(fit, q);
  if (var < kVarianceFloor)
    throw NearNullDegenerate("test_neighborhood: plug-in variance is degenerate");
  const double se = std::sqrt(var / static_cast<double>(s.n()));
  const double statistic = (estimate - delta) / se;

  // Equivalence direction: rejecting H: gw2 > delta certifies closeness, so
  // the rejection region is the lower tail.
  TestReport r;
  r.method = TestMethod::neighborhood;
  r.statistic = statistic;
  r.threshold = normal_quantile(alpha);
  r.p_value = normal_cdf(statistic);
  r.alpha = alpha;
  r.decision = statistic <= r.threshold ? Decision::reject : Decision::retain;
  r.n = static_cast<std::size_t>(s.n());
  r.nuisance = "studentized by the plug-in first-order variance";
  return r;
}

BootstrapDistribution bootstrap_n_of_n(const SampleSet& s,
                                       const GaussianMeasure& q, std::size_t b,
                                       Rng rng) {
  return bootstrap_impl(s, q, static_cast<std::size_t>(s.n()), b,
                        BootstrapScheme::nOfN, rng);
}

BootstrapDistribution bootstrap_m_of_n(const SampleSet& s,
                                       const GaussianMeasure& q, std::size_t m,
                                       std::size_t b, Rng rng) {
  if (m >= static_cast<std::size_t>(s.n()))
    throw InvalidInput("bootstrap_m_of_n: m must be smaller than n");
  if (m < static_cast<std::size_t>(s.dim()) + 1)
    throw InvalidInput("bootstrap_m_of_n: m too small to fit a Gaussian");
  return bootstrap_impl(s, q, m, b, BootstrapScheme::mOfN, rng);
}

std::size_t default_m_of_n(std::size_t n) {
  return static_cast<std::size_t>(
      std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0)));
}

std::vector<TestReport> protein_batch_test(const std::vector<ProteinSite>& sites,
                                           double alpha, std::size_t null_draws,
                                           Rng rng) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInput("protein_batch_test: alpha must be in (0,1)");

  // One spherical null quantile serves every site: the null law scales
  // linearly in the reference variance, and the statistic divides it out.
  const GaussianMeasure spherical(Vector::Zero(3), SpdMatrix::identity(3));
  const LimitLawSample null_law =
      sample_limit_null(spherical, LimitMode::oneSample, null_draws, rng);
  const double threshold = quantile(null_law, 1.0 - alpha);

  std::vector<TestReport> reports;
  reports.reserve(sites.size());
  for (const ProteinSite& site : sites) {
    TestReport r;
    r.method = TestMethod::proteinSite;
    r.alpha = alpha;
    r.threshold = threshold;
    r.label = site.label;
    r.n = static_cast<std::size_t>(site.sample.n());
    r.nuisance = "spherical null quantile, " + std::to_string(null_draws) +
                 " draws";
    if (site.sample.dim() != 3 || site.ref_mean.size() != 3 ||
        !(site.b_factor > 0.0)) {
      throw InvalidInput("protein_batch_test: sites must be 3-dimensional with "
                         "a positive b-factor");
    }
    try {
      if (site.sample.n() < 4)
        throw DegenerateSample("protein_batch_test: site sample too small");
      const GaussianMeasure ref(
          site.ref_mean,
          SpdMatrix::from_matrix(site.b_factor * Matrix::Identity(3, 3)));
      const double statistic = static_cast<double>(site.sample.n()) /
                               site.b_factor * gw_hat(site.sample, ref);
      r.statistic = statistic;
      r.p_value = exceedance(null_law.draws, statistic);
      r.decision =
          statistic >= threshold ? Decision::reject : Decision::retain;
    } catch (const DegenerateSample&) {
      r.decision = Decision::skipped;
      r.statistic = std::numeric_limits<double>::quiet_NaN();
      r.p_value = std::numeric_limits<double>::quiet_NaN();
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace gwstat
