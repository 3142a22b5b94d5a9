#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gwstat/inference.hpp"
#include "gwstat/stats.hpp"
#include "helpers.hpp"

using namespace gwstat;
using gwtest::random_measure;

namespace {

GaussianMeasure make_1d(double mean, double var) {
  return GaussianMeasure(Vector::Constant(1, mean),
                         SpdMatrix::from_matrix(Matrix::Constant(1, 1, var)));
}

// A two-point sample whose fit is exactly N(0, 1).
SampleSet exact_standard_sample() {
  Matrix rows(2, 1);
  const double a = std::sqrt(0.5);
  rows << -a, a;
  return SampleSet(rows);
}

GaussianMeasure acceptance_q() {
  Vector nu(2);
  nu << 1.0, 0.0;
  Matrix xi = Matrix::Zero(2, 2);
  xi.diagonal() << 2.0, 0.5;
  return GaussianMeasure(nu, SpdMatrix::from_matrix(xi));
}

}  // namespace

TEST_CASE("degenerate level gives a point interval") {
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const SampleSet s = sample_gaussian(p, 500, Rng(90));
  const ConfidenceInterval ci = ci_one_sample(s, acceptance_q(), 1.0);
  CHECK(ci.lower == doctest::Approx(ci.estimate));
  CHECK(ci.upper == doctest::Approx(ci.estimate));
}

TEST_CASE("interval width shrinks at the root-n rate") {
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const GaussianMeasure q = acceptance_q();
  const SampleSet s_small = sample_gaussian(p, 2000, Rng(91).stream(0));
  const SampleSet s_large = sample_gaussian(p, 8000, Rng(91).stream(1));
  const double w_small = ci_one_sample(s_small, q, 0.05).upper -
                         ci_one_sample(s_small, q, 0.05).lower;
  const double w_large = ci_one_sample(s_large, q, 0.05).upper -
                         ci_one_sample(s_large, q, 0.05).lower;
  CHECK(w_small / w_large == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("one-sample interval covers the truth at its nominal rate") {
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const GaussianMeasure q = acceptance_q();
  const double truth = gw2(p, q);
  Rng rng(92);
  int covered = 0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    const SampleSet s = sample_gaussian(p, 2000, rng.stream(r));
    const ConfidenceInterval ci = ci_one_sample(s, q, 0.05);
    if (ci.lower <= truth && truth <= ci.upper) ++covered;
  }
  const double rate = static_cast<double>(covered) / reps;
  CHECK(rate == doctest::Approx(0.95).epsilon(0.035));
}

TEST_CASE("two-sample interval is symmetric in its samples and covers") {
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const GaussianMeasure q = acceptance_q();
  const double truth = gw2(p, q);
  Rng rng(93);
  const SampleSet sx = sample_gaussian(p, 1500, rng.stream(0));
  const SampleSet sy = sample_gaussian(q, 1500, rng.stream(1));
  const ConfidenceInterval ab = ci_two_sample(sx, sy, 0.05);
  const ConfidenceInterval ba = ci_two_sample(sy, sx, 0.05);
  CHECK(ab.lower == doctest::Approx(ba.lower));
  CHECK(ab.upper == doctest::Approx(ba.upper));

  int covered = 0;
  const int reps = 300;
  for (int r = 0; r < reps; ++r) {
    const SampleSet x = sample_gaussian(p, 1500, rng.stream(100 + 2 * r));
    const SampleSet y = sample_gaussian(q, 1500, rng.stream(101 + 2 * r));
    const ConfidenceInterval ci = ci_two_sample(x, y, 0.05);
    if (ci.lower <= truth && truth <= ci.upper) ++covered;
  }
  CHECK(static_cast<double>(covered) / reps ==
        doctest::Approx(0.95).epsilon(0.04));
}

TEST_CASE("near-null data trips the degeneracy guard") {
  const SampleSet s = exact_standard_sample();
  const GaussianMeasure q = make_1d(0.0, 1.0);
  CHECK_THROWS_AS(ci_one_sample(s, q, 0.05), NearNullDegenerate);
  CHECK_THROWS_AS(test_neighborhood(s, q, 0.5, 0.05), NearNullDegenerate);
}

TEST_CASE("interval excludes zero exactly when the Wald statistic is large") {
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const GaussianMeasure q = acceptance_q();
  Rng rng(94);
  const double z = normal_quantile(1.0 - 0.05 / 2.0);
  for (int r = 0; r < 20; ++r) {
    const SampleSet s = sample_gaussian(p, 50, rng.stream(r));
    ConfidenceInterval ci;
    try {
      ci = ci_one_sample(s, q, 0.05);
    } catch (const NearNullDegenerate&) {
      continue;
    }
    const bool excludes_zero = ci.lower > 0.0;
    const bool wald_large = ci.estimate / ci.std_err > z;
    CHECK(excludes_zero == wald_large);
  }
}

TEST_CASE("equality test retains on its own reference and has monotone p-values") {
  const GaussianMeasure q = make_1d(0.0, 1.0);
  const SampleSet s = exact_standard_sample();
  // statistic is exactly zero here
  const TestReport r = test_equality(s, q, 0.05, 2000, Rng(95));
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.decision == Decision::retain);
  CHECK(r.p_value == doctest::Approx(1.0));

  // moving the reference away raises the statistic and lowers the p-value
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const SampleSet data = sample_gaussian(p, 400, Rng(96));
  const GaussianMeasure near(Vector::Zero(2), SpdMatrix::identity(2));
  Vector far_mean(2);
  far_mean << 0.8, 0.0;
  const GaussianMeasure far(far_mean, SpdMatrix::identity(2));
  const TestReport rn = test_equality(data, near, 0.05, 20000, Rng(97));
  const TestReport rf = test_equality(data, far, 0.05, 20000, Rng(97));
  CHECK(rf.statistic > rn.statistic);
  CHECK(rf.p_value <= rn.p_value);
}

TEST_CASE("equality test calibrates near its level and rejects alternatives") {
  const GaussianMeasure q(Vector::Zero(2), SpdMatrix::identity(2));
  Rng rng(98);
  int rejections = 0;
  const int reps = 300;
  for (int r = 0; r < reps; ++r) {
    const SampleSet s = sample_gaussian(q, 500, rng.stream(r));
    const TestReport t = test_equality(s, q, 0.05, 10000, rng.stream(10000 + r));
    if (t.decision == Decision::reject) ++rejections;
  }
  const double size = static_cast<double>(rejections) / reps;
  CHECK(size >= 0.01);
  CHECK(size <= 0.10);

  // alternative at squared distance 0.5
  Vector shifted = Vector::Zero(2);
  shifted[0] = std::sqrt(0.5);
  const GaussianMeasure alt(shifted, SpdMatrix::identity(2));
  int power_hits = 0;
  for (int r = 0; r < 50; ++r) {
    const SampleSet s = sample_gaussian(alt, 500, rng.stream(20000 + r));
    const TestReport t = test_equality(s, q, 0.05, 5000, rng.stream(30000 + r));
    if (t.decision == Decision::reject) ++power_hits;
  }
  CHECK(power_hits >= 48);
}

TEST_CASE("two-sample equality test runs and calibrates roughly") {
  const GaussianMeasure q(Vector::Zero(2), SpdMatrix::identity(2));
  Rng rng(99);
  int rejections = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const SampleSet sx = sample_gaussian(q, 400, rng.stream(2 * r));
    const SampleSet sy = sample_gaussian(q, 400, rng.stream(2 * r + 1));
    const TestReport t =
        test_equality(sx, sy, 0.05, 10000, rng.stream(40000 + r));
    if (t.decision == Decision::reject) ++rejections;
  }
  const double size = static_cast<double>(rejections) / reps;
  CHECK(size >= 0.005);
  CHECK(size <= 0.12);
}

TEST_CASE("neighborhood test semantics") {
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const GaussianMeasure q = acceptance_q();
  const double truth = gw2(p, q);

  // estimate far below delta: closeness certified
  const SampleSet s = sample_gaussian(p, 5000, Rng(110));
  const TestReport close = test_neighborhood(s, q, truth + 2.0, 0.05);
  CHECK(close.decision == Decision::reject);

  // boundary: statistic exactly zero, retained at alpha < 1/2
  const GaussianMeasure fit = empirical_gaussian(s);
  const double at_estimate = gw2(fit, q);
  const TestReport boundary = test_neighborhood(s, q, at_estimate, 0.05);
  CHECK(boundary.statistic == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(boundary.decision == Decision::retain);

  CHECK_THROWS_AS(test_neighborhood(s, q, -1.0, 0.05), InvalidInput);
}

TEST_CASE("neighborhood test holds its level at the boundary") {
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const GaussianMeasure q = acceptance_q();
  const double delta = gw2(p, q);  // boundary case gw2 == delta
  Rng rng(111);
  int rejections = 0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    const SampleSet s = sample_gaussian(p, 1000, rng.stream(r));
    if (test_neighborhood(s, q, delta, 0.05).decision == Decision::reject)
      ++rejections;
  }
  CHECK(static_cast<double>(rejections) / reps <= 0.05 + 0.025);
}

TEST_CASE("bootstrap reproducibility and sampling-noise match") {
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const GaussianMeasure q = acceptance_q();
  const SampleSet s = sample_gaussian(p, 2000, Rng(112));

  const BootstrapDistribution b1 = bootstrap_n_of_n(s, q, 500, Rng(113));
  const BootstrapDistribution b2 = bootstrap_n_of_n(s, q, 500, Rng(113));
  REQUIRE(b1.replicates.size() == b2.replicates.size());
  for (std::size_t i = 0; i < b1.replicates.size(); ++i)
    CHECK(b1.replicates[i] == b2.replicates[i]);

  const BootstrapDistribution big = bootstrap_n_of_n(s, q, 2000, Rng(114));
  const double sd = std::sqrt(sample_variance(big.replicates));
  const double upsilon =
      std::sqrt(one_sample_variance(empirical_gaussian(s), q));
  CHECK(sd == doctest::Approx(upsilon).epsilon(0.10));

  // distributional sanity against the normal limit
  std::vector<double> sorted = sorted_copy(big.replicates);
  const double ks = ks_distance(sorted, [&](double x) {
    return normal_cdf(x / upsilon);
  });
  CHECK(ks <= 0.07);
}

TEST_CASE("bootstrap rejects invalid resample sizes") {
  const GaussianMeasure q(Vector::Zero(2), SpdMatrix::identity(2));
  const SampleSet s = sample_gaussian(q, 100, Rng(115));
  CHECK_THROWS_AS(bootstrap_m_of_n(s, q, 100, 10, Rng(116)), InvalidInput);
  CHECK_THROWS_AS(bootstrap_m_of_n(s, q, 150, 10, Rng(116)), InvalidInput);
  CHECK(default_m_of_n(5000) == 293);  // ceil(5000^{2/3})
}

TEST_CASE("m-of-n bootstrap tracks the null law under equality") {
  const GaussianMeasure q(Vector::Zero(2), SpdMatrix::identity(2));
  const SampleSet s = sample_gaussian(q, 3000, Rng(117));
  const std::size_t m = default_m_of_n(3000);
  const BootstrapDistribution boot = bootstrap_m_of_n(s, q, m, 1500, Rng(118));
  CHECK(boot.skipped == 0);
  const LimitLawSample law = sample_limit_null(
      empirical_gaussian(s), LimitMode::oneSample, 50000, Rng(119));
  CHECK(mc::ks_between(boot.replicates, law.draws) <= 0.08);
}

TEST_CASE("bootstrap statistics are translation invariant") {
  const GaussianMeasure p(Vector::Zero(2), SpdMatrix::identity(2));
  const GaussianMeasure q = acceptance_q();
  const SampleSet s = sample_gaussian(p, 500, Rng(120));
  Vector v(2);
  v << 3.0, -2.0;
  Matrix shifted_rows = s.rows();
  shifted_rows.rowwise() += v.transpose();
  const GaussianMeasure q_shifted(q.mean + v, q.cov);

  const BootstrapDistribution a = bootstrap_n_of_n(s, q, 200, Rng(121));
  const BootstrapDistribution b =
      bootstrap_n_of_n(SampleSet(shifted_rows), q_shifted, 200, Rng(121));
  REQUIRE(a.replicates.size() == b.replicates.size());
  for (std::size_t i = 0; i < a.replicates.size(); ++i)
    CHECK(std::abs(a.replicates[i] - b.replicates[i]) <=
          1e-9 * (1.0 + std::abs(a.replicates[i])));
}

TEST_CASE("protein batch test calibrates, detects shifts and skips degenerates") {
  Rng rng(122);
  const double sigma2 = 0.7;
  std::vector<ProteinSite> sites;

  // calibration sites drawn from their own references
  const int calib = 60;
  for (int i = 0; i < calib; ++i) {
    Vector mu(3);
    for (int j = 0; j < 3; ++j) mu[j] = rng.normal();
    const GaussianMeasure ref(
        mu, SpdMatrix::from_matrix(sigma2 * Matrix::Identity(3, 3)));
    sites.push_back(ProteinSite{sample_gaussian(ref, 120, rng.stream(i)), mu,
                                sigma2, "calib" + std::to_string(i)});
  }
  // one strongly shifted site
  {
    Vector mu = Vector::Zero(3);
    const GaussianMeasure ref(
        mu, SpdMatrix::from_matrix(sigma2 * Matrix::Identity(3, 3)));
    Vector shifted = mu;
    shifted[0] += 10.0 * std::sqrt(sigma2);
    sites.push_back(ProteinSite{
        sample_gaussian(GaussianMeasure(shifted, ref.cov), 120, rng.stream(999)),
        mu, sigma2, "shifted"});
  }
  // one degenerate site (too few rows)
  {
    Matrix rows = Matrix::Zero(3, 3);
    rows(1, 0) = 1.0;
    rows(2, 1) = 1.0;
    sites.push_back(ProteinSite{SampleSet(rows), Vector::Zero(3), sigma2,
                                "degenerate"});
  }

  const std::vector<TestReport> reports =
      protein_batch_test(sites, 0.05, 20000, Rng(123));
  REQUIRE(reports.size() == sites.size());

  int calib_rejects = 0;
  for (int i = 0; i < calib; ++i)
    if (reports[static_cast<std::size_t>(i)].decision == Decision::reject)
      ++calib_rejects;
  CHECK(calib_rejects <= 9);  // ~3 expected at the 5% level

  CHECK(reports[calib].label == "shifted");
  CHECK(reports[calib].decision == Decision::reject);
  CHECK(reports[calib + 1].decision == Decision::skipped);
}

TEST_CASE("protein batch test validates site shape") {
  std::vector<ProteinSite> bad;
  bad.push_back(ProteinSite{
      SampleSet(Matrix::Random(10, 2)), Vector::Zero(2), 1.0, "flat"});
  CHECK_THROWS_AS(protein_batch_test(bad, 0.05, 2000, Rng(1)), InvalidInput);
}
