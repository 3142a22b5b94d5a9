#include "gwstat/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace gwstat {

namespace {

// Crossover widths for the confluent fallback, relative to the eigenvalue
// scale: below them the derivative value is more accurate than the
// cancelling quotient.
constexpr double kTieTol1 = 1e-5;
constexpr double kTieTol2 = 1e-4;

double checked(double v, const char* who) {
  if (!std::isfinite(v)) throw DomainError(std::string(who) + ": non-finite value");
  return v;
}

}  // namespace

const ScalarFunction& ScalarFunction::sqrt_fn() {
  static const ScalarFunction f{
      [](double x) { return std::sqrt(x); },
      [](double x) { return 0.5 / std::sqrt(x); },
      [](double x) { return -0.25 / (x * std::sqrt(x)); },
      [](double a, double b) { return 1.0 / (std::sqrt(a) + std::sqrt(b)); },
      [](double a, double b, double c) {
        const double ra = std::sqrt(a);
        const double rb = std::sqrt(b);
        const double rc = std::sqrt(c);
        return -1.0 / ((ra + rb) * (rb + rc) * (rc + ra));
      }};
  return f;
}

const ScalarFunction& ScalarFunction::square() {
  static const ScalarFunction f{
      [](double x) { return x * x; },
      [](double x) { return 2.0 * x; },
      [](double) { return 2.0; },
      [](double a, double b) { return a + b; },
      [](double, double, double) { return 1.0; }};
  return f;
}

const ScalarFunction& ScalarFunction::cube() {
  static const ScalarFunction f{
      [](double x) { return x * x * x; },
      [](double x) { return 3.0 * x * x; },
      [](double x) { return 6.0 * x; },
      [](double a, double b) { return a * a + a * b + b * b; },
      [](double a, double b, double c) { return a + b + c; }};
  return f;
}

const ScalarFunction& ScalarFunction::identity() {
  static const ScalarFunction f{
      [](double x) { return x; },
      [](double) { return 1.0; },
      [](double) { return 0.0; },
      [](double, double) { return 1.0; },
      [](double, double, double) { return 0.0; }};
  return f;
}

double divided_diff1(const ScalarFunction& f, double a, double b) {
  if (f.dd1) return checked(f.dd1(a, b), "divided_diff1");
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  if (std::abs(a - b) <= kTieTol1 * scale)
    return checked(f.deriv1(0.5 * (a + b)), "divided_diff1");
  return checked((f.value(a) - f.value(b)) / (a - b), "divided_diff1");
}

double divided_diff2(const ScalarFunction& f, double a, double b, double c) {
  if (f.dd2) return checked(f.dd2(a, b, c), "divided_diff2");
  // Symmetric in the arguments; sort so the closest pair is adjacent.
  double x = a, y = b, z = c;
  if (x > y) std::swap(x, y);
  if (y > z) std::swap(y, z);
  if (x > y) std::swap(x, y);
  const double scale = std::max({std::abs(x), std::abs(z), 1e-300});
  if (z - x <= kTieTol2 * scale)
    return checked(0.5 * f.deriv2((x + y + z) / 3.0), "divided_diff2");
  const double left = divided_diff1(f, x, y);
  const double right = divided_diff1(f, y, z);
  return checked((left - right) / (x - z), "divided_diff2");
}

namespace detail {

Matrix apply_spectral(const ScalarFunction& f, const EigenDecomposition& e) {
  const int d = e.dim();
  Vector fv(d);
  for (int i = 0; i < d; ++i)
    fv[i] = checked(f.value(e.eigenvalues[i]), "apply_spectral");
  return e.eigenvectors * fv.asDiagonal() * e.eigenvectors.transpose();
}

Matrix d_spectral(const ScalarFunction& f, const EigenDecomposition& e,
                  const Matrix& g) {
  const int d = e.dim();
  const Matrix ghat = e.eigenvectors.transpose() * g * e.eigenvectors;
  Matrix scaled(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      scaled(i, k) =
          divided_diff1(f, e.eigenvalues[i], e.eigenvalues[k]) * ghat(i, k);
  return e.eigenvectors * scaled * e.eigenvectors.transpose();
}

Matrix d2_spectral_taylor(const ScalarFunction& f, const EigenDecomposition& e,
                          const Matrix& g) {
  const int d = e.dim();
  const Matrix ghat = e.eigenvectors.transpose() * g * e.eigenvectors;
  Matrix out_hat(d, d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      double acc = 0.0;
      for (int j = 0; j < d; ++j)
        acc += divided_diff2(f, e.eigenvalues[i], e.eigenvalues[j],
                             e.eigenvalues[k]) *
               ghat(i, j) * ghat(j, k);
      out_hat(i, k) = acc;
    }
  }
  return e.eigenvectors * out_hat * e.eigenvectors.transpose();
}

}  // namespace detail

SymMatrix apply_spectral(const ScalarFunction& f, const SpdMatrix& a) {
  return SymMatrix::symmetrized(detail::apply_spectral(f, a.eig()));
}

SymMatrix d_spectral(const ScalarFunction& f, const SpdMatrix& a,
                     const SymMatrix& g) {
  if (g.dim() != a.dim()) throw InvalidInput("d_spectral: dimension mismatch");
  return SymMatrix::symmetrized(detail::d_spectral(f, a.eig(), g.mat()));
}

SymMatrix d2_spectral_taylor(const ScalarFunction& f, const SpdMatrix& a,
                             const SymMatrix& g) {
  if (g.dim() != a.dim())
    throw InvalidInput("d2_spectral_taylor: dimension mismatch");
  return SymMatrix::symmetrized(detail::d2_spectral_taylor(f, a.eig(), g.mat()));
}

PerturbationPair::PerturbationPair(Vector g_in, Vector g_prime_in,
                                   SymMatrix big_g_in, SymMatrix big_g_prime_in)
    : g(std::move(g_in)),
      g_prime(std::move(g_prime_in)),
      G(std::move(big_g_in)),
      G_prime(std::move(big_g_prime_in)) {
  if (g.size() != g_prime.size() || G.dim() != G_prime.dim() ||
      g.size() != G.dim())
    throw InvalidInput("PerturbationPair: inconsistent dimensions");
}

GwFirstDerivative::GwFirstDerivative(const GaussianMeasure& p,
                                     const GaussianMeasure& q) {
  if (p.dim() != q.dim())
    throw InvalidInput("GwFirstDerivative: dimension mismatch");
  const int d = p.dim();
  mean_coeff_ = 2.0 * (p.mean - q.mean);

  const Matrix s = spd_sqrt(p.cov).mat();
  const Matrix s_inv = spd_inv_sqrt(p.cov).mat();
  const SpdMatrix t = SpdMatrix::from_matrix(s * q.cov.mat() * s);
  const Matrix m = spd_sqrt(t).mat();
  const Matrix m_inv = spd_inv_sqrt(t).mat();

  const Matrix eye = Matrix::Identity(d, d);
  w_g_ = SymMatrix::symmetrized(eye - s_inv * m * s_inv).mat();
  w_gp_ = SymMatrix::symmetrized(eye - s * m_inv * s).mat();
}

double GwFirstDerivative::value(const PerturbationPair& h) const {
  return value(h.g, h.g_prime, h.G.mat(), h.G_prime.mat());
}

double GwFirstDerivative::value(const Vector& g, const Vector& g_prime,
                                const Matrix& big_g,
                                const Matrix& big_g_prime) const {
  if (g.size() != mean_coeff_.size() || big_g.rows() != w_g_.rows())
    throw InvalidInput("GwFirstDerivative: direction dimension mismatch");
  return mean_coeff_.dot(g - g_prime) + w_g_.cwiseProduct(big_g).sum() +
         w_gp_.cwiseProduct(big_g_prime).sum();
}

GwSecondDerivative::GwSecondDerivative(const GaussianMeasure& p,
                                       const GaussianMeasure& q) {
  if (p.dim() != q.dim())
    throw InvalidInput("GwSecondDerivative: dimension mismatch");
  ea_ = p.cov.eig();
  s_ = spd_sqrt(p.cov).mat();
  b_ = q.cov.mat();
  bs_ = b_ * s_;
  et_ = symmetric_eig(SymMatrix::symmetrized(s_ * b_ * s_));

  const int d = p.dim();
  const auto& sqrt_fn = ScalarFunction::sqrt_fn();
  dpsi_t_.resize(d);
  q2_coeff_.resize(d, d);
  for (int i = 0; i < d; ++i) {
    const double ki = et_.eigenvalues[i];
    if (!(ki > 0.0))
      throw NotSpd("GwSecondDerivative: inner matrix is not positive definite");
    dpsi_t_[i] = 0.5 / std::sqrt(ki);
    for (int j = 0; j < d; ++j)
      q2_coeff_(i, j) = divided_diff2(sqrt_fn, ki, et_.eigenvalues[j], ki);
  }
}

double GwSecondDerivative::value(const PerturbationPair& h) const {
  return value(h.g, h.g_prime, h.G.mat(), h.G_prime.mat());
}

double GwSecondDerivative::value(const Vector& g, const Vector& g_prime,
                                 const Matrix& big_g,
                                 const Matrix& big_g_prime) const {
  const int d = ea_.dim();
  if (g.size() != d || big_g.rows() != d)
    throw InvalidInput("GwSecondDerivative: direction dimension mismatch");
  const auto& sqrt_fn = ScalarFunction::sqrt_fn();

  const Matrix d1 = detail::d_spectral(sqrt_fn, ea_, big_g);
  const Matrix d2a = 2.0 * detail::d2_spectral_taylor(sqrt_fn, ea_, big_g);

  // C = D(psi(A) B psi(A))[(G,G')], D2T = D^2(psi(A) B psi(A))[(G,G')x2].
  const Matrix x = d1 * bs_;
  const Matrix c = x + x.transpose() + s_ * big_g_prime * s_;
  const Matrix y = d2a * bs_;
  const Matrix z = d1 * big_g_prime * s_;
  const Matrix d2t = y + y.transpose() + 2.0 * z + 2.0 * z.transpose() +
                     2.0 * d1 * b_ * d1;

  const Matrix c_hat = et_.eigenvectors.transpose() * c * et_.eigenvectors;
  double tr_quad = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      tr_quad += q2_coeff_(i, j) * c_hat(i, j) * c_hat(i, j);

  double tr_lin = 0.0;
  for (int i = 0; i < d; ++i) {
    const auto qi = et_.eigenvectors.col(i);
    tr_lin += dpsi_t_[i] * qi.dot(d2t * qi);
  }

  return 2.0 * (g - g_prime).squaredNorm() - 2.0 * (2.0 * tr_quad + tr_lin);
}

double d_gw(const GaussianMeasure& p, const GaussianMeasure& q,
            const PerturbationPair& h) {
  return GwFirstDerivative(p, q).value(h);
}

double d_gw_one_sample(const GaussianMeasure& p, const GaussianMeasure& q_fixed,
                       const Vector& g, const SymMatrix& big_g) {
  if (p.dim() != q_fixed.dim() || g.size() != p.dim() || big_g.dim() != p.dim())
    throw InvalidInput("d_gw_one_sample: dimension mismatch");
  const Matrix sb = spd_sqrt(q_fixed.cov).mat();
  const EigenDecomposition e =
      symmetric_eig(SymMatrix::symmetrized(sb * p.cov.mat() * sb));
  const Matrix w = sb * big_g.mat() * sb;
  double ksum = 0.0;
  for (int l = 0; l < e.dim(); ++l) {
    const double kappa = e.eigenvalues[l];
    if (!(kappa > 0.0))
      throw NotSpd("d_gw_one_sample: inner matrix is not positive definite");
    const auto rl = e.eigenvectors.col(l);
    ksum += rl.dot(w * rl) / std::sqrt(kappa);
  }
  return 2.0 * (p.mean - q_fixed.mean).dot(g) + big_g.trace() - ksum;
}

double d2_gw(const GaussianMeasure& p, const GaussianMeasure& q,
             const PerturbationPair& h) {
  return GwSecondDerivative(p, q).value(h);
}

}  // namespace gwstat
