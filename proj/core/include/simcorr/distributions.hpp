#pragma once

// Exact sampling laws of the similarity measure and of the similarity estimator.
//
// Bivariate, homogeneous variances: phi_r - phi_rho has density (1/pi) sech(.).
// Equicorrelation of dimension n: phi_r - phi_rho is Logistic-Beta with mean -omega_n.
// The finite-T law is that of the standardized estimator
//     z = sqrt(T) (gamma_hat + omega_n - phi_rho) / sqrt(V_n),
// which for n = 2 is (2 sqrt(T) / pi)(gamma_hat - phi_rho) with CF sech(u / sqrt(T))^T.

#include <complex>
#include <cstddef>

#include "simcorr/similarity.hpp"

namespace simcorr {

double sech_pdf(double x, double center);
/// (2/pi) arctan(exp(x - center)).
double sech_cdf(double x, double center);

/// Variance of phi_r under a heteroskedastic bivariate elliptical law:
/// pi^2/6 - sum_k cos(2k theta)/k^2 with theta the factor angle gap, via the closed form of
/// the cosine series. Lies in (0, pi^2/4]; equals pi^2/4 iff the variances coincide.
double hetero_variance(const BivariateCovariance& spec);

/// Bias of the multivariate similarity measure: (1/n)(psi((n-1)/2) - psi(1/2)).
double omega_n(std::size_t n);

double logistic_beta_pdf(double x, std::size_t n, double center);
/// (1/n^2)(psi'((n-1)/2) + pi^2/2).
double logistic_beta_variance(std::size_t n);
/// Characteristic function of phi_r - phi_rho under the Logistic-Beta law, from its
/// moment generating function continued to the imaginary axis.
std::complex<double> logistic_beta_cf(double u, std::size_t n);

/// sech(u / sqrt(T))^T.
double finite_sample_cf(double u, std::size_t T);
double finite_sample_cdf(double z, std::size_t T);
double finite_sample_pdf(double z, std::size_t T);
/// Quantile of the pi/2-standardized estimator for sample size T.
double finite_sample_quantile(double p, std::size_t T);

/// Exact law of the standardized similarity estimator for sample size T and dimension n.
///
/// Immutable after construction; safe to share across threads.
class FiniteSampleLaw {
 public:
  explicit FiniteSampleLaw(std::size_t T, std::size_t n = 2);

  std::size_t sample_size() const noexcept { return T_; }
  std::size_t dimension() const noexcept { return n_; }
  /// Standard deviation of one phi_r draw; pi/2 when n == 2.
  double unit_scale() const noexcept { return unit_scale_; }
  /// Beyond this point |CF(u)| < 1e-17 and the inversion integrals are truncated.
  double truncation() const noexcept { return truncation_; }
  bool symmetric() const noexcept { return n_ == 2; }

  std::complex<double> cf(double u) const;
  double cdf(double z) const;
  double pdf(double z) const;
  double quantile(double p) const;

 private:
  double log_abs_cf(double u) const;

  std::size_t T_;
  std::size_t n_;
  double unit_scale_;
  double omega_;
  double log_norm_;
  double truncation_;
};

}  // namespace simcorr
