#include "simcorr/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "simcorr/errors.hpp"
#include "simcorr/numerics.hpp"

namespace simcorr {

namespace {

constexpr double kPi = std::numbers::pi;
// log(1e-17): the CF is treated as zero below this magnitude.
constexpr double kLogNegligible = -39.143;
constexpr double kQuadratureTol = 1e-12;
// The Logistic-Beta CF is raised to the power T, which amplifies the ~1e-15 rounding of the
// complex log-gamma; the adaptive rule cannot resolve below that noise floor.
constexpr double kQuadratureTolMultivariate = 1e-10;

void require_dimension(std::size_t n, const char* op) {
  if (n < 2) throw DomainError(std::string(op) + ": dimension must be at least 2");
}

// log B(1/2, (n-1)/2)
double log_beta_norm(std::size_t n) {
  const double a = 0.5 * static_cast<double>(n - 1);
  return std::lgamma(0.5) + std::lgamma(a) - std::lgamma(0.5 + a);
}

}  // namespace

double sech_pdf(double x, double center) {
  return std::exp(numerics::log_sech(x - center)) / kPi;
}

double sech_cdf(double x, double center) {
  return 2.0 / kPi * std::atan(std::exp(x - center));
}

double hetero_variance(const BivariateCovariance& spec) {
  // sum_{k>=1} cos(k t)/k^2 = pi^2/6 - pi t/2 + t^2/4 on [0, 2 pi], so the variance is
  // t (2 pi - t) / 4 with t = 2 theta reduced to [0, 2 pi).
  const double two_pi = 2.0 * kPi;
  double t = std::fmod(2.0 * spec.angle_gap(), two_pi);
  if (t < 0.0) t += two_pi;
  return t * (two_pi - t) / 4.0;
}

double omega_n(std::size_t n) {
  require_dimension(n, "omega_n");
  const double a = 0.5 * static_cast<double>(n - 1);
  return (numerics::digamma(a) - numerics::digamma(0.5)) / static_cast<double>(n);
}

double logistic_beta_pdf(double x, std::size_t n, double center) {
  require_dimension(n, "logistic_beta_pdf");
  const double dim = static_cast<double>(n);
  const double s = dim * (x - center);
  // log(1 + e^s) without overflow
  const double softplus = s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
  const double log_f = std::log(dim) + 0.5 * s - 0.5 * dim * softplus - log_beta_norm(n);
  return std::exp(log_f);
}

double logistic_beta_variance(std::size_t n) {
  require_dimension(n, "logistic_beta_variance");
  const double dim = static_cast<double>(n);
  return (numerics::trigamma(0.5 * (dim - 1.0)) + kPi * kPi / 2.0) / (dim * dim);
}

std::complex<double> logistic_beta_cf(double u, std::size_t n) {
  require_dimension(n, "logistic_beta_cf");
  const double dim = static_cast<double>(n);
  const double a = 0.5 * (dim - 1.0);
  const std::complex<double> iv{0.0, u / dim};
  const std::complex<double> log_m = numerics::log_gamma(0.5 + iv) + numerics::log_gamma(a - iv) -
                                     std::lgamma(0.5) - std::lgamma(a);
  return std::exp(log_m);
}

double finite_sample_cf(double u, std::size_t T) {
  if (T < 1) throw DomainError("finite_sample_cf: T must be at least 1");
  const double t = static_cast<double>(T);
  return std::exp(t * numerics::log_sech(u / std::sqrt(t)));
}

double finite_sample_cdf(double z, std::size_t T) { return FiniteSampleLaw(T).cdf(z); }
double finite_sample_pdf(double z, std::size_t T) { return FiniteSampleLaw(T).pdf(z); }
double finite_sample_quantile(double p, std::size_t T) { return FiniteSampleLaw(T).quantile(p); }

FiniteSampleLaw::FiniteSampleLaw(std::size_t T, std::size_t n) : T_(T), n_(n) {
  if (T < 1) throw DomainError("finite-sample law: T must be at least 1");
  require_dimension(n, "finite-sample law");
  omega_ = omega_n(n);
  unit_scale_ = n == 2 ? kPi / 2.0 : std::sqrt(logistic_beta_variance(n));
  log_norm_ = std::lgamma(0.5) + std::lgamma(0.5 * static_cast<double>(n - 1));

  double hi = 1.0;
  while (log_abs_cf(hi) > kLogNegligible) {
    hi *= 2.0;
    if (hi > 1e6) throw NumericalError("finite-sample law: characteristic function does not decay");
  }
  double lo = 0.5 * hi;
  for (int k = 0; k < 40; ++k) {
    const double mid = 0.5 * (lo + hi);
    (log_abs_cf(mid) > kLogNegligible ? lo : hi) = mid;
  }
  truncation_ = hi;
}

double FiniteSampleLaw::log_abs_cf(double u) const {
  return std::log(std::abs(cf(u)));
}

std::complex<double> FiniteSampleLaw::cf(double u) const {
  const double t = static_cast<double>(T_);
  if (n_ == 2) return {finite_sample_cf(u, T_), 0.0};
  const double dim = static_cast<double>(n_);
  const double v = u / (std::sqrt(t) * unit_scale_);
  const std::complex<double> iv{0.0, v / dim};
  const std::complex<double> log_m = numerics::log_gamma(0.5 + iv) +
                                     numerics::log_gamma(0.5 * (dim - 1.0) - iv) - log_norm_;
  const std::complex<double> log_centered = log_m + std::complex<double>{0.0, omega_ * v};
  return std::exp(t * log_centered);
}

double FiniteSampleLaw::cdf(double z) const {
  if (std::isnan(z)) throw DomainError("cdf: argument is NaN");
  if (z == 0.0 && symmetric()) return 0.5;
  const double panel = kPi / (std::abs(z) + 1.0);
  if (symmetric()) {
    const double a = std::abs(z);
    auto integrand = [this, a](double u) { return std::sin(u * a) * cf(u).real() / u; };
    const double tail = numerics::integrate(integrand, 0.0, truncation_, kQuadratureTol, panel).value;
    const double upper = std::clamp(0.5 + tail / kPi, 0.0, 1.0);
    return z > 0.0 ? upper : 1.0 - upper;
  }
  auto integrand = [this, z](double u) {
    const std::complex<double> rotated = std::exp(std::complex<double>{0.0, -u * z}) * cf(u);
    return rotated.imag() / u;
  };
  const double value = numerics::integrate(integrand, 0.0, truncation_, kQuadratureTolMultivariate,
                                           panel, kQuadratureTolMultivariate)
                           .value;
  return std::clamp(0.5 - value / kPi, 0.0, 1.0);
}

double FiniteSampleLaw::pdf(double z) const {
  if (std::isnan(z)) throw DomainError("pdf: argument is NaN");
  const double panel = kPi / (std::abs(z) + 1.0);
  auto integrand = [this, z](double u) {
    const std::complex<double> rotated = std::exp(std::complex<double>{0.0, -u * z}) * cf(u);
    return rotated.real();
  };
  const double tol = symmetric() ? kQuadratureTol : kQuadratureTolMultivariate;
  const double value = numerics::integrate(integrand, 0.0, truncation_, tol, panel, tol).value;
  return std::max(0.0, value / kPi);
}

double FiniteSampleLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
  if (symmetric()) {
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -quantile(1.0 - p);
  }
  double lo = -10.0;
  double hi = 10.0;
  auto excess = [this, p](double z) { return cdf(z) - p; };
  if (symmetric()) lo = 0.0;
  while (excess(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) throw NumericalError("quantile: could not bracket the root");
  }
  while (excess(lo) > 0.0) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e4) throw NumericalError("quantile: could not bracket the root");
  }
  return numerics::find_root(excess, lo, hi, 1e-10);
}

}  // namespace simcorr
