#pragma once

#include <cmath>
#include <vector>

#include "gwstat/frechet.hpp"
#include "gwstat/gaussian.hpp"
#include "gwstat/gw.hpp"
#include "gwstat/montecarlo.hpp"

namespace gwtest {

using namespace gwstat;

inline GaussianMeasure random_measure(int dim, Rng& rng, double mean_scale = 1.0,
                                      double ev_lo = 0.4, double ev_hi = 2.5) {
  Vector mu(dim);
  for (int i = 0; i < dim; ++i) mu[i] = mean_scale * rng.normal();
  return GaussianMeasure(mu, mc::random_spd(dim, rng, ev_lo, ev_hi));
}

inline PerturbationPair random_direction(int dim, Rng& rng, double scale = 0.5) {
  Vector g(dim), gp(dim);
  for (int i = 0; i < dim; ++i) {
    g[i] = scale * rng.normal();
    gp[i] = scale * rng.normal();
  }
  Matrix big_g(dim, dim), big_gp(dim, dim);
  detail::fill_wigner(big_g, rng);
  detail::fill_wigner(big_gp, rng);
  return PerturbationPair(g, gp,
                          SymMatrix::from_symmetric(scale * big_g),
                          SymMatrix::from_symmetric(scale * big_gp));
}

inline GaussianMeasure perturbed(const GaussianMeasure& p, double eps,
                                 const Vector& g, const Matrix& big_g) {
  return GaussianMeasure(p.mean + eps * g,
                         SpdMatrix::from_matrix(p.cov.mat() + eps * big_g));
}

/// Least-squares slope of log(err) against log(eps); err entries at or below
/// the floor are dropped.
inline double fitted_order(const std::vector<double>& eps,
                           const std::vector<double>& err,
                           double floor = 1e-13) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (err[i] <= floor) continue;
    const double x = std::log(eps[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 10.0;  // remainder vanished below the floor everywhere
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace gwtest
