#pragma once

#include <functional>
#include <utility>

#include "gwstat/gaussian.hpp"
#include "gwstat/symmat.hpp"

namespace gwstat {

/// Scalar function with two derivatives, lifted to symmetric matrices
/// through the spectrum. Closed-form divided differences can be supplied;
/// the built-ins use forms that stay accurate on clustered spectra (for the
/// square root, f[a,b] = 1/(sqrt a + sqrt b) and
/// f[a,b,c] = -1/((sqrt a + sqrt b)(sqrt b + sqrt c)(sqrt c + sqrt a))).
struct ScalarFunction {
  std::function<double(double)> value;
  std::function<double(double)> deriv1;
  std::function<double(double)> deriv2;

  // Optional exact divided differences; when absent a confluent fallback
  // switches to derivative values on near-ties.
  std::function<double(double, double)> dd1;
  std::function<double(double, double, double)> dd2;

  static const ScalarFunction& sqrt_fn();
  static const ScalarFunction& square();
  static const ScalarFunction& cube();
  static const ScalarFunction& identity();
};

/// First divided difference f[a,b], confluent value f'(a) on ties.
double divided_diff1(const ScalarFunction& f, double a, double b);

/// Second divided difference f[a,b,c], confluent value f''(a)/2 on a
/// triple tie.
double divided_diff2(const ScalarFunction& f, double a, double b, double c);

/// f(A) = sum_i f(lambda_i) P_i.
SymMatrix apply_spectral(const ScalarFunction& f, const SpdMatrix& a);

/// Derivative of A -> f(A) in direction G:
/// sum_{i,k} f[lambda_i, lambda_k] P_i G P_k.
SymMatrix d_spectral(const ScalarFunction& f, const SpdMatrix& a,
                     const SymMatrix& g);

/// Second-order Taylor coefficient Q[G] of f(A + eps G), i.e.
/// f(A + eps G) = f(A) + eps Df[G] + eps^2 Q[G] + O(eps^3), given by
/// sum_{i,j,k} f[lambda_i, lambda_j, lambda_k] P_i G P_j G P_k.
/// The true second Frechet derivative is 2 Q[G].
SymMatrix d2_spectral_taylor(const ScalarFunction& f, const SpdMatrix& a,
                             const SymMatrix& g);

namespace detail {
Matrix apply_spectral(const ScalarFunction& f, const EigenDecomposition& e);
Matrix d_spectral(const ScalarFunction& f, const EigenDecomposition& e,
                  const Matrix& g);
Matrix d2_spectral_taylor(const ScalarFunction& f, const EigenDecomposition& e,
                          const Matrix& g);
}  // namespace detail

/// Tangent direction (g, g', G, G') in mean/covariance space.
struct PerturbationPair {
  PerturbationPair(Vector g_in, Vector g_prime_in, SymMatrix big_g_in,
                   SymMatrix big_g_prime_in);

  int dim() const { return static_cast<int>(g.size()); }

  Vector g;
  Vector g_prime;
  SymMatrix G;
  SymMatrix G_prime;
};

/// First derivative of the squared Gaussian Wasserstein functional
///   Phi(mu, nu, A, B) = ||mu-nu||^2 + tr A + tr B - 2 tr[(A^{1/2}BA^{1/2})^{1/2}]
/// at (P, Q), factored once so directions evaluate in O(d^2). The linear
/// form is
///   2(mu-nu).(g-g') + <I - A^{-1/2} M A^{-1/2}, G> + <I - A^{1/2} M^{-1} A^{1/2}, G'>
/// with M = (A^{1/2} B A^{1/2})^{1/2}. The covariance coefficients are the
/// collapsed divided-difference sums over the spectral pairs, so repeated
/// eigenvalues need no separate branch.
class GwFirstDerivative {
 public:
  GwFirstDerivative(const GaussianMeasure& p, const GaussianMeasure& q);

  double value(const PerturbationPair& h) const;
  double value(const Vector& g, const Vector& g_prime, const Matrix& big_g,
               const Matrix& big_g_prime) const;

  const Matrix& cov_coefficient() const { return w_g_; }
  const Matrix& cov_prime_coefficient() const { return w_gp_; }

 private:
  Vector mean_coeff_;  // 2 (mu - nu)
  Matrix w_g_;
  Matrix w_gp_;
};

/// Second derivative of the same functional as a quadratic form, assembled
/// from the chain and product rules over psi(psi(A) B psi(A)) with
/// psi = sqrt. value() returns the true second derivative, so the Taylor
/// expansion of the functional carries a factor 1/2 in front of it.
class GwSecondDerivative {
 public:
  GwSecondDerivative(const GaussianMeasure& p, const GaussianMeasure& q);

  double value(const PerturbationPair& h) const;
  double value(const Vector& g, const Vector& g_prime, const Matrix& big_g,
               const Matrix& big_g_prime) const;

 private:
  Vector mu_gap_;          // mu - nu
  EigenDecomposition ea_;  // eigendecomposition of A
  Matrix s_;               // A^{1/2}
  Matrix b_;               // B
  Matrix bs_;              // B A^{1/2}
  EigenDecomposition et_;  // eigendecomposition of T = A^{1/2} B A^{1/2}
  Vector dpsi_t_;          // psi'(kappa_i)
  Matrix q2_coeff_;        // psi[kappa_i, kappa_j, kappa_i]
};

/// D Phi at (P,Q) applied to h.
double d_gw(const GaussianMeasure& p, const GaussianMeasure& q,
            const PerturbationPair& h);

/// One-sample form: derivative in (mu, A) only, with (nu, B) fixed:
///   2(mu-nu).g + tr G - sum_l kappa_l^{-1/2} r_l^t B^{1/2} G B^{1/2} r_l,
/// where (kappa_l, r_l) is the eigendecomposition of B^{1/2} A B^{1/2}.
double d_gw_one_sample(const GaussianMeasure& p, const GaussianMeasure& q_fixed,
                       const Vector& g, const SymMatrix& big_g);

/// D^2 Phi at (P,Q) applied to [h,h] (true second derivative).
double d2_gw(const GaussianMeasure& p, const GaussianMeasure& q,
             const PerturbationPair& h);

}  // namespace gwstat
