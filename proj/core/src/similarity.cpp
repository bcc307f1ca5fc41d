#include "simcorr/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simcorr/distributions.hpp"
#include "simcorr/errors.hpp"
#include "simcorr/numerics.hpp"

namespace simcorr {

double fisher(double rho) {
  if (!(std::abs(rho) < 1.0)) throw DomainError("fisher: correlation must lie in (-1, 1)");
  return std::atanh(rho);
}

double inverse_fisher(double g) {
  if (!std::isfinite(g)) throw DomainError("inverse_fisher: argument must be finite");
  return std::tanh(g);
}

double phi_r(double x1, double x2) {
  if (x1 == x2) {
    throw DegenerateObservation(x1 == 0.0 ? DegenerateLocus::origin : DegenerateLocus::equal);
  }
  if (x1 == -x2) throw DegenerateObservation(DegenerateLocus::opposite);
  // Power-of-two normalisation is exact, so sums and differences cannot overflow and
  // rescaling the observation by 2^k leaves the result bit-identical.
  const int e = std::ilogb(std::max(std::abs(x1), std::abs(x2)));
  const double a = std::ldexp(x1, -e);
  const double b = std::ldexp(x2, -e);
  return std::log(std::abs(a + b)) - std::log(std::abs(a - b));
}

double phi_r(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("phi_r: dimension must be at least 2");
  if (n == 2) return phi_r(x[0], x[1]);

  double max_abs = 0.0;
  for (double v : x) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) throw DegenerateObservation(DegenerateLocus::origin);
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
    throw DegenerateObservation(DegenerateLocus::along_ones);
  }
  const int e = std::ilogb(max_abs);

  numerics::CompensatedSum sum;
  for (double v : x) sum.add(std::ldexp(v, -e));
  const double total = sum.value();
  if (total == 0.0) throw DegenerateObservation(DegenerateLocus::orthogonal_to_ones);

  const double dim = static_cast<double>(n);
  const double mean = total / dim;
  // corrected two-pass sum of squares around the mean
  numerics::CompensatedSum sq;
  numerics::CompensatedSum dev;
  for (double v : x) {
    const double d = std::ldexp(v, -e) - mean;
    sq.add(d * d);
    dev.add(d);
  }
  const double orth = sq.value() - dev.value() * dev.value() / dim;
  const double along = total * total / dim;
  if (!(orth > 0.0)) throw DegenerateObservation(DegenerateLocus::along_ones);
  return (std::log(along) - std::log(orth)) / dim;
}

SimilarityEstimate gamma_hat(const Sample& sample) {
  numerics::CompensatedSum acc;
  const std::size_t T = sample.rows();
  const bool bivariate = sample.is_bivariate();
  for (std::size_t t = 0; t < T; ++t) {
    try {
      const auto row = sample.row(t);
      acc.add(bivariate ? phi_r(row[0], row[1]) : phi_r(row));
    } catch (const DegenerateObservation& e) {
      throw DegenerateObservation(e.locus(), t);
    }
  }
  return {acc.value() / static_cast<double>(T), T, sample.cols(), false};
}

SimilarityEstimate gamma_hat_bias_corrected(const Sample& sample) {
  SimilarityEstimate est = gamma_hat(sample);
  est.gamma_hat += omega_n(est.n);
  est.bias_corrected = true;
  return est;
}

void BivariateCovariance::validate() const {
  if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0) || !std::isfinite(sigma1_sq) ||
      !std::isfinite(sigma2_sq) || !std::isfinite(sigma12)) {
    throw DomainError("covariance: variances must be positive and finite");
  }
  if (!(sigma12 * sigma12 < sigma1_sq * sigma2_sq)) {
    throw DomainError("covariance: matrix is not positive definite");
  }
}

double BivariateCovariance::correlation() const {
  validate();
  return sigma12 / std::sqrt(sigma1_sq * sigma2_sq);
}

double BivariateCovariance::resemblance() const {
  validate();
  return 2.0 * sigma12 / (sigma1_sq + sigma2_sq);
}

double BivariateCovariance::angle_gap() const {
  validate();
  // Lower-triangular factor A with A A' = Sigma.
  const double s1 = std::sqrt(sigma1_sq);
  const double s2 = std::sqrt(sigma2_sq);
  const double rho = sigma12 / (s1 * s2);
  const double a21 = sigma12 / s1;
  const double a22 = s2 * std::sqrt(1.0 - rho * rho);
  // (1, 1)'A = (s1 + a21, a22) and (1, -1)'A = (s1 - a21, -a22)
  const double phi1 = std::atan2(a22, s1 + a21);
  const double phi2 = std::atan2(-a22, s1 - a21);
  return phi2 - phi1;
}

void EquicorrelationCovariance::validate() const {
  if (n < 2) throw DomainError("equicorrelation: dimension must be at least 2");
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
    throw DomainError("equicorrelation: variance must be positive and finite");
  }
  const double lower = -1.0 / static_cast<double>(n - 1);
  if (!(rho > lower && rho < 1.0)) {
    throw DomainError("equicorrelation: rho must lie in (-1/(n-1), 1)");
  }
}

double EquicorrelationCovariance::lambda_plus() const {
  validate();
  return sigma_sq * (1.0 + static_cast<double>(n - 1) * rho);
}

double EquicorrelationCovariance::lambda_minus() const {
  validate();
  return sigma_sq * (1.0 - rho);
}

double EquicorrelationCovariance::phi() const {
  validate();
  return equicorr_phi(rho, n);
}

double resemblance_coefficient(const BivariateCovariance& spec) { return spec.resemblance(); }

double equicorr_phi(double rho, std::size_t n) {
  if (n < 2) throw DomainError("equicorr_phi: dimension must be at least 2");
  if (n == 2) return fisher(rho);
  const double m = static_cast<double>(n - 1);
  if (!(rho > -1.0 / m && rho < 1.0)) {
    throw DomainError("equicorr_phi: rho must lie in (-1/(n-1), 1)");
  }
  return (std::log1p(m * rho) - std::log1p(-rho)) / static_cast<double>(n);
}

double equicorr_phi_inverse(double phi, std::size_t n) {
  if (n < 2) throw DomainError("equicorr_phi_inverse: dimension must be at least 2");
  if (!std::isfinite(phi)) throw DomainError("equicorr_phi_inverse: argument must be finite");
  if (n == 2) return std::tanh(phi);
  const double dim = static_cast<double>(n);
  const double s = dim * phi;
  if (s > 0.0) {
    const double w = std::exp(-s);
    return (1.0 - w) / (1.0 + (dim - 1.0) * w);
  }
  const double e = std::expm1(s);
  return e / (e + dim);
}

}  // namespace simcorr
