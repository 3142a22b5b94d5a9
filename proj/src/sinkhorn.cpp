#include "gwstat/sinkhorn.hpp"

#include <cmath>

#include "gwstat/errors.hpp"

namespace gwstat {

namespace {

// Single precision internally: the kernel matrices dominate the cost and the
// oracle only needs ~1e-4 relative accuracy.
using MatrixF = Eigen::MatrixXf;
using VectorF = Eigen::VectorXf;

MatrixF squared_distances(const MatrixF& x, const MatrixF& y) {
  const VectorF xn = x.rowwise().squaredNorm();
  const VectorF yn = y.rowwise().squaredNorm();
  MatrixF c = -2.0f * (x * y.transpose());
  c.colwise() += xn;
  c.rowwise() += yn.transpose();
  return c.cwiseMax(0.0f);
}

}  // namespace

SinkhornResult entropic_ot(const Matrix& x, const Matrix& y, double epsilon,
                           int max_iterations, double tolerance) {
  if (x.cols() != y.cols())
    throw InvalidInput("entropic_ot: point dimensions differ");
  if (x.rows() < 1 || y.rows() < 1)
    throw InvalidInput("entropic_ot: empty cloud");
  if (!(epsilon > 0.0)) throw InvalidInput("entropic_ot: epsilon must be > 0");

  const Eigen::Index n = x.rows();
  const Eigen::Index m = y.rows();
  const float log_a = -std::log(static_cast<float>(n));
  const float log_b = -std::log(static_cast<float>(m));
  const float eps = static_cast<float>(epsilon);

  const MatrixF neg_cost_over_eps =
      -squared_distances(x.cast<float>(), y.cast<float>()) / eps;
  VectorF f = VectorF::Zero(n);  // potentials divided by epsilon
  VectorF g = VectorF::Zero(m);
  MatrixF work(n, m);

  SinkhornResult result;
  for (int it = 0; it < max_iterations; ++it) {
    // f_i <- -lse_j(-C_ij/eps + g_j + log b), then the symmetric update.
    work = neg_cost_over_eps.rowwise() + g.transpose();
    VectorF mx = work.rowwise().maxCoeff();
    f = -(mx.array() +
          ((work.colwise() - mx).array().exp().rowwise().sum()).log() + log_b);

    work = neg_cost_over_eps.colwise() + f;
    VectorF mxc = work.colwise().maxCoeff();
    g = -(mxc.array() +
          ((work.rowwise() - mxc.transpose()).array().exp().colwise().sum())
              .transpose()
              .log() +
          log_a);
    result.iterations = it + 1;

    // Row-marginal violation of the implied plan, checked periodically.
    if (it % 10 == 9 || it == max_iterations - 1) {
      work = (neg_cost_over_eps.colwise() + f).rowwise() + g.transpose();
      work.array() += log_a + log_b;
      const VectorF row_mass = work.array().exp().rowwise().sum();
      result.marginal_err =
          (row_mass.array() - 1.0f / static_cast<float>(n)).abs().sum();
      if (result.marginal_err < tolerance) break;
    }
  }

  work = (neg_cost_over_eps.colwise() + f).rowwise() + g.transpose();
  work.array() += log_a + log_b;
  result.cost = static_cast<double>(
      (work.array().exp() * (-eps * neg_cost_over_eps).array()).sum());
  return result;
}

double sinkhorn_divergence(const Matrix& x, const Matrix& y, double epsilon,
                           int max_iterations, double tolerance) {
  const double xy = entropic_ot(x, y, epsilon, max_iterations, tolerance).cost;
  const double xx = entropic_ot(x, x, epsilon, max_iterations, tolerance).cost;
  const double yy = entropic_ot(y, y, epsilon, max_iterations, tolerance).cost;
  return xy - 0.5 * (xx + yy);
}

}  // namespace gwstat
