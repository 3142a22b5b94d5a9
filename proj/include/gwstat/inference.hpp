#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gwstat/gw.hpp"
#include "gwstat/limitlaw.hpp"

namespace gwstat {

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
  double std_err = 0.0;  // of the estimate, already divided by the rate
  double alpha = 0.0;
};

// Plug-in variances below this floor indicate the near-null regime where the
// first-order normal asymptotics degenerate.
inline constexpr double kVarianceFloor = 1e-10;

/// Wald interval for gw2(P, Q) from one estimated sample, intersected with
/// [0, inf). Throws NearNullDegenerate when the plug-in variance collapses.
ConfidenceInterval ci_one_sample(const SampleSet& s, const GaussianMeasure& q,
                                 double alpha);

/// Two-sample Wald interval with rate sqrt(nm/(n+m)) and weight a = n/(n+m).
ConfidenceInterval ci_two_sample(const SampleSet& sx, const SampleSet& sy,
                                 double alpha);

enum class Decision { retain, reject, skipped };

enum class TestMethod {
  equalityOneSample,
  equalityTwoSample,
  neighborhood,
  proteinSite,
};

struct TestReport {
  TestMethod method = TestMethod::equalityOneSample;
  double statistic = 0.0;
  double threshold = 0.0;
  double p_value = 0.0;
  double alpha = 0.0;
  Decision decision = Decision::retain;
  std::size_t n = 0;
  std::optional<std::size_t> m;
  std::string nuisance;  // how the threshold/variance was obtained
  std::string label;     // site name for batch tests
};

/// Equality test against a known reference: statistic n * gw_hat(S, Q),
/// rejected when it reaches the (1-alpha) quantile of the null limit law
/// sampled at the fitted Gaussian. p-value is the Monte Carlo exceedance
/// proportion.
TestReport test_equality(const SampleSet& s, const GaussianMeasure& q_ref,
                         double alpha, std::size_t null_draws, Rng rng);

/// Two-sample equality test: statistic 2 (nm/(n+m)) gw_hat2 (equal sizes:
/// n * gw_hat2) against the two-sample null law sampled at the pooled fit.
TestReport test_equality(const SampleSet& sx, const SampleSet& sy, double alpha,
                         std::size_t null_draws, Rng rng);

/// Neighborhood (equivalence) test of H: gw2 > delta against K: gw2 <= delta.
/// Rejecting H certifies closeness. The studentized statistic
/// sqrt(n)(gw_hat - delta)/vhat is compared against the lower-tail normal
/// quantile z_alpha; H is rejected when the statistic falls at or below it.
TestReport test_neighborhood(const SampleSet& s, const GaussianMeasure& q,
                             double delta, double alpha);

enum class BootstrapScheme { nOfN, mOfN };

struct BootstrapDistribution {
  std::vector<double> replicates;  // successful replicates only
  std::size_t b = 0;               // == replicates.size()
  std::size_t requested = 0;
  std::size_t skipped = 0;  // degenerate resamples dropped
  std::size_t m = 0;        // resample size
  BootstrapScheme scheme = BootstrapScheme::nOfN;
};

/// n-of-n bootstrap of sqrt(n)(gw_hat* - gw_hat); valid in the P != Q
/// regime. Degenerate resamples are skipped and counted; more than 1% of
/// them aborts with DegenerateSample.
BootstrapDistribution bootstrap_n_of_n(const SampleSet& s,
                                       const GaussianMeasure& q, std::size_t b,
                                       Rng rng);

/// m-of-n bootstrap of m (gw_hat*_m - gw_hat_n) for the P = Q regime;
/// requires m < n. The conventional choice is m = ceil(n^{2/3}).
BootstrapDistribution bootstrap_m_of_n(const SampleSet& s,
                                       const GaussianMeasure& q, std::size_t m,
                                       std::size_t b, Rng rng);

std::size_t default_m_of_n(std::size_t n);

/// One observation site for the batch test: positions in R^3, an isotropic
/// Gaussian reference N(ref_mean, b_factor * I).
struct ProteinSite {
  SampleSet sample;
  Vector ref_mean;
  double b_factor = 1.0;
  std::string label;
};

/// Per-site test of "positions follow the isotropic reference": statistic
/// (n / b_factor) * gw_hat against the spherical null quantile, computed
/// once per level (the null law scales linearly in the variance, so N(0, I)
/// suffices). No multiplicity correction; degenerate sites are skipped.
std::vector<TestReport> protein_batch_test(const std::vector<ProteinSite>& sites,
                                           double alpha, std::size_t null_draws,
                                           Rng rng);

}  // namespace gwstat
