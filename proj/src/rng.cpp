#include "gwstat/rng.hpp"

#include <cmath>

#include "gwstat/errors.hpp"

namespace gwstat {

double sample_gamma(double shape, Rng& rng) {
  if (shape < 1.0) throw InvalidInput("sample_gamma: shape must be >= 1");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_chi_squared(double dof, Rng& rng) {
  if (dof < 2.0) throw InvalidInput("sample_chi_squared: dof must be >= 2");
  return 2.0 * sample_gamma(0.5 * dof, rng);
}

}  // namespace gwstat
