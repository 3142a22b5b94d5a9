#include "gwstat/limitlaw.hpp"

#include <cmath>

#include "gwstat/gw.hpp"
#include "gwstat/parallel.hpp"
#include "gwstat/stats.hpp"

namespace gwstat {

namespace {

// Cluster predicate for the repeated-eigenvalue correction of the literal
// two-sample formula.
constexpr double kEigClusterTol = 1e-8;

double frobenius_trace(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();  // tr(a b) for symmetric a, b
}

}  // namespace

double one_sample_variance(const GaussianMeasure& p, const GaussianMeasure& q) {
  if (p.dim() != q.dim())
    throw InvalidInput("one_sample_variance: dimension mismatch");
  const Matrix& sigma = p.cov.mat();
  const Matrix& xi = q.cov.mat();
  const Vector gap = q.mean - p.mean;

  const Matrix sxi = spd_sqrt(q.cov).mat();
  const Matrix sxi_inv = spd_inv_sqrt(q.cov).mat();
  const EigenDecomposition inner =
      symmetric_eig(SymMatrix::symmetrized(sxi * sigma * sxi));
  const Matrix conjugated = sxi_inv * sigma * sxi;  // Xi^{-1/2} Sigma Xi^{1/2}

  double ksum = 0.0;
  for (int k = 0; k < inner.dim(); ++k) {
    const auto rk = inner.eigenvectors.col(k);
    ksum += std::sqrt(std::max(inner.eigenvalues[k], 0.0)) *
            rk.dot(conjugated * rk);
  }

  const double value = 4.0 * gap.dot(sigma * gap) + 2.0 * sigma.squaredNorm() +
                       2.0 * frobenius_trace(sigma, xi) - 4.0 * ksum;
  return value < 0.0 ? 0.0 : value;
}

double two_sample_variance(const GaussianMeasure& p, const GaussianMeasure& q,
                           double a, VarianceFormula formula) {
  if (p.dim() != q.dim())
    throw InvalidInput("two_sample_variance: dimension mismatch");
  if (!(a > 0.0 && a < 1.0))
    throw InvalidInput("two_sample_variance: weight a must be in (0,1)");
  const Matrix& sigma = p.cov.mat();
  const Matrix& xi = q.cov.mat();
  const Vector gap = q.mean - p.mean;

  const Matrix s = spd_sqrt(p.cov).mat();
  const Matrix s_inv = spd_inv_sqrt(p.cov).mat();
  const EigenDecomposition inner =
      symmetric_eig(SymMatrix::symmetrized(s * xi * s));
  const Matrix conjugated = s_inv * xi * s;  // Sigma^{-1/2} Xi Sigma^{1/2}

  double ksum = 0.0;
  for (int k = 0; k < inner.dim(); ++k) {
    const auto qk = inner.eigenvectors.col(k);
    ksum += std::sqrt(std::max(inner.eigenvalues[k], 0.0)) *
            ((1.0 - a) * qk.dot(sigma * qk) + a * qk.dot(conjugated * qk));
  }

  double value = 4.0 * gap.dot(((1.0 - a) * sigma + a * xi) * gap) +
                 2.0 * ((1.0 - a) * sigma.squaredNorm() + a * xi.squaredNorm()) -
                 4.0 * ksum;

  if (formula == VarianceFormula::certified) {
    // Monte Carlo certification selects the a-free cross-trace term and no
    // repeated-eigenvalue correction; see variance_oracle.
    value += 2.0 * frobenius_trace(sigma, xi);
    return value < 0.0 ? 0.0 : value;
  }

  value += 2.0 * a * frobenius_trace(sigma, xi);

  // Correction over eigenvalue clusters of Sigma (literal form only; it
  // vanishes whenever the eigenvalues are distinct).
  const EigenDecomposition es = p.cov.eig();
  const int d = es.dim();
  const double cluster_width = kEigClusterTol * es.eigenvalues[0];
  Matrix v = inner.eigenvectors.transpose() * es.eigenvectors;  // v(l,i) = q_l . p_i
  Vector root_kappa = inner.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  Matrix cross(d, d);  // cross(i,j) = sum_l sqrt(kappa_l) v(l,i) v(l,j)
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int l = 0; l < d; ++l) acc += root_kappa[l] * v(l, i) * v(l, j);
      cross(i, j) = acc;
    }
  double correction = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (j != i &&
          std::abs(es.eigenvalues[i] - es.eigenvalues[j]) <= cluster_width)
        correction += cross(i, j) * cross(i, j);
  value -= 2.0 * (1.0 - a) * correction;
  return value;
}

VarianceReport variance_oracle(const GaussianMeasure& p,
                               const GaussianMeasure& q, double a,
                               LimitMode mode, std::size_t n_draws, Rng rng) {
  if (p.dim() != q.dim())
    throw InvalidInput("variance_oracle: dimension mismatch");
  if (n_draws < 10000)
    throw InvalidInput("variance_oracle: need at least 1e4 draws");
  if (mode == LimitMode::twoSample && !(a > 0.0 && a < 1.0))
    throw InvalidInput("variance_oracle: weight a must be in (0,1)");

  const int d = p.dim();
  const GwFirstDerivative deriv(p, q);
  const Matrix root_sigma = spd_sqrt(p.cov).mat();
  const Matrix root_xi = spd_sqrt(q.cov).mat();
  const double w_g = mode == LimitMode::oneSample ? 1.0 : std::sqrt(1.0 - a);
  const double w_gp = mode == LimitMode::oneSample ? 0.0 : std::sqrt(a);
  const bool two = mode == LimitMode::twoSample;

  std::vector<double> values(n_draws);
  parallel_for(n_draws, [&](std::size_t i) {
    Rng s = rng.stream(i);
    Vector z(d);
    for (int j = 0; j < d; ++j) z[j] = s.normal();
    const Vector g = w_g * (root_sigma * z);
    Matrix h(d, d);
    detail::fill_wigner(h, s);
    const Matrix big_g = w_g * (root_sigma * h * root_sigma);

    Vector gp = Vector::Zero(d);
    Matrix big_gp = Matrix::Zero(d, d);
    if (two) {
      for (int j = 0; j < d; ++j) z[j] = s.normal();
      gp = w_gp * (root_xi * z);
      detail::fill_wigner(h, s);
      big_gp = w_gp * (root_xi * h * root_xi);
    }
    values[i] = deriv.value(g, gp, big_g, big_gp);
  });

  VarianceReport report;
  report.formula_value = mode == LimitMode::oneSample
                             ? one_sample_variance(p, q)
                             : two_sample_variance(p, q, a);
  report.oracle_value = sample_variance(values);
  report.oracle_std_err = variance_standard_error(values);
  report.discrepancy = std::abs(report.formula_value - report.oracle_value) >
                       4.0 * report.oracle_std_err;
  return report;
}

LimitLawSample sample_limit_null(const GaussianMeasure& p, LimitMode mode,
                                 std::size_t n_draws, Rng rng, double a) {
  if (n_draws < 1000)
    throw InvalidInput("sample_limit_null: need at least 1e3 draws");
  if (mode == LimitMode::twoSample && !(a > 0.0 && a < 1.0))
    throw InvalidInput("sample_limit_null: weight a must be in (0,1)");

  const int d = p.dim();
  const GwSecondDerivative second(p, p);
  const Matrix root = spd_sqrt(p.cov).mat();
  const double w_g = mode == LimitMode::oneSample ? 1.0 : std::sqrt(2.0 * (1.0 - a));
  const double w_gp = mode == LimitMode::oneSample ? 0.0 : std::sqrt(2.0 * a);
  const bool two = mode == LimitMode::twoSample;

  LimitLawSample out;
  out.mode = mode;
  out.a = a;
  out.seed = rng.key();
  out.draws.resize(n_draws);
  parallel_for(n_draws, [&](std::size_t i) {
    Rng s = rng.stream(i);
    Vector z(d);
    for (int j = 0; j < d; ++j) z[j] = s.normal();
    const Vector g = w_g * (root * z);
    Matrix h(d, d);
    detail::fill_wigner(h, s);
    const Matrix big_g = w_g * (root * h * root);

    Vector gp = Vector::Zero(d);
    Matrix big_gp = Matrix::Zero(d, d);
    if (two) {
      for (int j = 0; j < d; ++j) z[j] = s.normal();
      gp = w_gp * (root * z);
      detail::fill_wigner(h, s);
      big_gp = w_gp * (root * h * root);
    }
    out.draws[i] = 0.5 * second.value(g, gp, big_g, big_gp);
  });
  return out;
}

double quantile(const LimitLawSample& sample, double p) {
  if (sample.draws.empty()) throw InvalidInput("quantile: empty sample");
  const std::vector<double> sorted = sorted_copy(sample.draws);
  return quantile_lower(sorted, p);
}

}  // namespace gwstat
