#pragma once

#include "gwstat/symmat.hpp"

namespace gwstat {

/// Entropic optimal transport between uniform point clouds (rows of x and
/// y), used as a model-free cross-check of the closed-form Gaussian
/// distance. Not a general-purpose solver: dense log-domain Sinkhorn with
/// squared Euclidean cost, uniform weights only.
struct SinkhornResult {
  double cost = 0.0;        // <pi, C> at the final potentials
  double marginal_err = 0.0;  // L1 violation of the row marginal
  int iterations = 0;
};

SinkhornResult entropic_ot(const Matrix& x, const Matrix& y, double epsilon,
                           int max_iterations = 400, double tolerance = 1e-6);

/// Debiased Sinkhorn divergence
///   OT_eps(x,y) - (OT_eps(x,x) + OT_eps(y,y)) / 2,
/// a low-bias estimate of the squared 2-Wasserstein distance between the
/// clouds' underlying distributions.
double sinkhorn_divergence(const Matrix& x, const Matrix& y, double epsilon,
                           int max_iterations = 400, double tolerance = 1e-6);

}  // namespace gwstat
