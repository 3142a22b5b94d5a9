#include "gwstat/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "gwstat/gw.hpp"
#include "gwstat/parallel.hpp"
#include "gwstat/stats.hpp"

namespace gwstat::mc {

namespace {

Matrix gaussian_rows(const Matrix& root, const Vector& mean, int n, Rng& rng) {
  const int d = static_cast<int>(mean.size());
  Matrix z(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = rng.normal();
  Matrix rows = z * root;
  rows.rowwise() += mean.transpose();
  return rows;
}

}  // namespace

std::vector<double> one_sample_clt_stats(const GaussianMeasure& p,
                                         const GaussianMeasure& q, int n,
                                         std::size_t replicates, Rng rng) {
  const double truth = gw2(p, q);
  const double upsilon = std::sqrt(one_sample_variance(p, q));
  const Matrix root = spd_sqrt(p.cov).mat();
  const double rate = std::sqrt(static_cast<double>(n));

  std::vector<double> stats(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    Rng s = rng.stream(r);
    const SampleSet sample(gaussian_rows(root, p.mean, n, s));
    stats[r] = rate * (gw_hat(sample, q) - truth) / upsilon;
  });
  return stats;
}

std::vector<double> two_sample_clt_stats(const GaussianMeasure& p,
                                         const GaussianMeasure& q, int n, int m,
                                         std::size_t replicates, Rng rng) {
  const double truth = gw2(p, q);
  const double a =
      static_cast<double>(n) / static_cast<double>(n + m);
  const double varpi = std::sqrt(two_sample_variance(p, q, a));
  const Matrix root_p = spd_sqrt(p.cov).mat();
  const Matrix root_q = spd_sqrt(q.cov).mat();
  const double rate = std::sqrt(static_cast<double>(n) *
                                static_cast<double>(m) /
                                static_cast<double>(n + m));

  std::vector<double> stats(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    Rng s = rng.stream(r);
    const SampleSet sx(gaussian_rows(root_p, p.mean, n, s));
    const SampleSet sy(gaussian_rows(root_q, q.mean, m, s));
    stats[r] = rate * (gw_hat2(sx, sy) - truth) / varpi;
  });
  return stats;
}

std::vector<double> null_statistic_draws(const GaussianMeasure& p, int n,
                                         std::size_t replicates, LimitMode mode,
                                         Rng rng) {
  const Matrix root = spd_sqrt(p.cov).mat();
  std::vector<double> stats(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    Rng s = rng.stream(r);
    const SampleSet sx(gaussian_rows(root, p.mean, n, s));
    if (mode == LimitMode::oneSample) {
      stats[r] = static_cast<double>(n) * gw_hat(sx, p);
    } else {
      const SampleSet sy(gaussian_rows(root, p.mean, n, s));
      stats[r] = static_cast<double>(n) * gw_hat2(sx, sy);
    }
  });
  return stats;
}

double ks_vs_standard_normal(std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  return ks_distance(draws, [](double x) { return normal_cdf(x); });
}

double ks_between(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return ks_distance_two_sample(a, b);
}

Matrix random_orthogonal(int dim, Rng& rng) {
  Matrix z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

SpdMatrix random_spd(int dim, Rng& rng, double lo, double hi) {
  const Matrix q = random_orthogonal(dim, rng);
  Vector vals(dim);
  for (int i = 0; i < dim; ++i) vals[i] = lo + (hi - lo) * rng.uniform();
  return SpdMatrix::from_matrix(q * vals.asDiagonal() * q.transpose());
}

std::vector<VarianceCertRow> certify_variances(const std::vector<int>& dims,
                                               int configs_per_dim,
                                               std::size_t n_draws,
                                               std::uint64_t seed,
                                               double tolerance_std_errs) {
  struct Config {
    int dim;
    int index;
    GaussianMeasure p;
    GaussianMeasure q;
    double a;
  };
  std::vector<Config> configs;
  Rng base(seed);
  for (const int d : dims) {
    for (int c = 0; c < configs_per_dim; ++c) {
      Rng gen = base.stream(static_cast<std::uint64_t>(d) * 1000 +
                            static_cast<std::uint64_t>(c));
      Vector mu(d), nu(d);
      for (int j = 0; j < d; ++j) mu[j] = 0.7 * gen.normal();
      for (int j = 0; j < d; ++j) nu[j] = 0.7 * gen.normal();
      SpdMatrix sigma = random_spd(d, gen);
      SpdMatrix xi = random_spd(d, gen);
      const double a = 0.15 + 0.7 * gen.uniform();
      configs.push_back(Config{d, c, GaussianMeasure(mu, std::move(sigma)),
                               GaussianMeasure(nu, std::move(xi)), a});
    }
  }

  // Both modes per configuration, certified independently.
  std::vector<VarianceCertRow> rows(2 * configs.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const Config& cfg = configs[i / 2];
    const LimitMode mode =
        i % 2 == 0 ? LimitMode::oneSample : LimitMode::twoSample;
    Rng oracle_rng =
        Rng(seed).stream(0xC0FFEEull ^ i);  // independent of config generation
    const VarianceReport rep =
        variance_oracle(cfg.p, cfg.q, cfg.a, mode, n_draws, oracle_rng);
    VarianceCertRow row;
    row.dim = cfg.dim;
    row.config = cfg.index;
    row.mode = mode;
    row.a = cfg.a;
    row.formula = rep.formula_value;
    row.oracle = rep.oracle_value;
    row.std_err = rep.oracle_std_err;
    row.pass = std::abs(row.formula - row.oracle) <=
               tolerance_std_errs * row.std_err;
    rows[i] = std::move(row);
  }, 0);

  // Per-block diagnostics for failures: zero out direction groups and
  // compare against the matching formula pieces.
  for (std::size_t row_idx = 0; row_idx < rows.size(); ++row_idx) {
    VarianceCertRow& row = rows[row_idx];
    if (row.pass) continue;
    const Config& cfg = configs[row_idx / 2];
    const double a = row.mode == LimitMode::oneSample ? 1.0 : cfg.a;
    const Vector gap = cfg.q.mean - cfg.p.mean;
    const double mean_formula =
        row.mode == LimitMode::oneSample
            ? 4.0 * gap.dot(cfg.p.cov.mat() * gap)
            : 4.0 * gap.dot((((1.0 - a) * cfg.p.cov.mat()) +
                             a * cfg.q.cov.mat()) *
                            gap);
    row.block_formula = {mean_formula, row.formula - mean_formula};
    // Oracle reruns with selective directions are deliberately smaller.
    const std::size_t diag_draws = std::max<std::size_t>(n_draws / 10, 10000);
    GwFirstDerivative deriv(cfg.p, cfg.q);
    const Matrix root_sigma = spd_sqrt(cfg.p.cov).mat();
    const Matrix root_xi = spd_sqrt(cfg.q.cov).mat();
    const int d = cfg.p.dim();
    const double w_g =
        row.mode == LimitMode::oneSample ? 1.0 : std::sqrt(1.0 - cfg.a);
    const double w_gp =
        row.mode == LimitMode::oneSample ? 0.0 : std::sqrt(cfg.a);
    for (const bool means_only : {true, false}) {
      std::vector<double> vals(diag_draws);
      Rng diag_rng = Rng(seed).stream(0xD1A6ull ^ (row_idx << 1) ^
                                      (means_only ? 1ull : 0ull));
      parallel_for(diag_draws, [&](std::size_t k) {
        Rng s = diag_rng.stream(k);
        Vector z(d);
        for (int j = 0; j < d; ++j) z[j] = s.normal();
        Vector g = w_g * (root_sigma * z);
        Matrix h(d, d);
        detail::fill_wigner(h, s);
        Matrix big_g = w_g * (root_sigma * h * root_sigma);
        Vector gp = Vector::Zero(d);
        Matrix big_gp = Matrix::Zero(d, d);
        if (row.mode == LimitMode::twoSample) {
          for (int j = 0; j < d; ++j) z[j] = s.normal();
          gp = w_gp * (root_xi * z);
          detail::fill_wigner(h, s);
          big_gp = w_gp * (root_xi * h * root_xi);
        }
        if (means_only) {
          big_g.setZero();
          big_gp.setZero();
        } else {
          g.setZero();
          gp.setZero();
        }
        vals[k] = deriv.value(g, gp, big_g, big_gp);
      });
      row.block_oracle.push_back(sample_variance(vals));
      row.block_std_err.push_back(variance_standard_error(vals));
    }
  }
  return rows;
}

D1CrossCheck d1_cross_check(const GaussianMeasure& p, const GaussianMeasure& q,
                            int n, Rng rng) {
  if (p.dim() != 1 || q.dim() != 1)
    throw InvalidInput("d1_cross_check: requires one-dimensional measures");
  const SampleSet s = sample_gaussian(p, n, rng);
  D1CrossCheck out;
  out.gw_hat_value = gw_hat(s, q);

  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = s.rows()(i, 0);
  std::sort(x.begin(), x.end());
  const double sd = std::sqrt(q.cov.mat()(0, 0));
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    y[static_cast<std::size_t>(i)] = q.mean[0] + sd * normal_quantile(u);
  }
  out.quantile_value = w2_empirical_1d(x, y);
  out.rel_gap = std::abs(out.gw_hat_value - out.quantile_value) /
                std::max(out.quantile_value, 1e-300);
  return out;
}

}  // namespace gwstat::mc
