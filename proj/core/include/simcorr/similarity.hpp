#pragma once

// Resemblance, similarity and Fisher-scale maps, and the similarity estimator.
//
// Observations are taken as zero-mean; nothing here subtracts a mean.

#include <cstddef>
#include <span>

#include "simcorr/sample.hpp"

namespace simcorr {

/// Fisher transformation atanh(rho). Throws DomainError unless |rho| < 1.
double fisher(double rho);
/// tanh(g). Throws DomainError for non-finite g.
double inverse_fisher(double g);

/// Bivariate similarity measure log|x1 + x2| - log|x1 - x2|.
/// Throws DegenerateObservation when x1 == x2 or x1 == -x2 (including the origin).
double phi_r(double x1, double x2);

/// Multivariate similarity measure (1/n) log(x'P x / x'P_perp x), P the projection on the
/// vector of ones. For n == 2 it coincides with the bivariate measure.
double phi_r(std::span<const double> x);

struct SimilarityEstimate {
  double gamma_hat = 0.0;  // Fisher / log-matrix scale
  std::size_t T = 0;
  std::size_t n = 0;
  bool bias_corrected = false;
};

/// Mean of the per-row similarity measures. A degenerate row raises DegenerateObservation
/// carrying its index.
SimilarityEstimate gamma_hat(const Sample& sample);

/// gamma_hat + omega_n. Identical to gamma_hat when n == 2.
SimilarityEstimate gamma_hat_bias_corrected(const Sample& sample);

/// Bivariate covariance (sigma1^2, sigma2^2, sigma12).
struct BivariateCovariance {
  double sigma1_sq;
  double sigma2_sq;
  double sigma12;

  /// Throws DomainError unless the matrix is positive definite.
  void validate() const;
  double correlation() const;
  /// xi = 2 sigma12 / (sigma1^2 + sigma2^2).
  double resemblance() const;
  /// Angular gap phi2 - phi1 between the images of (1,1) and (1,-1) under the lower-triangular
  /// factor of the covariance; governs the variance of the similarity measure.
  double angle_gap() const;
};

/// Equicorrelation covariance sigma^2 [(1-rho) I + rho 11'] of dimension n.
struct EquicorrelationCovariance {
  double sigma_sq;
  double rho;
  std::size_t n;

  void validate() const;
  double lambda_plus() const;   // multiplicity 1, eigenvector along the ones
  double lambda_minus() const;  // multiplicity n - 1
  /// Off-diagonal element of log Sigma.
  double phi() const;
};

double resemblance_coefficient(const BivariateCovariance& spec);

/// (1/n) log((1 + (n-1) rho) / (1 - rho)); requires -1/(n-1) < rho < 1.
double equicorr_phi(double rho, std::size_t n);
/// Inverse of equicorr_phi: (e^{n phi} - 1) / (e^{n phi} + n - 1).
double equicorr_phi_inverse(double phi, std::size_t n);

}  // namespace simcorr
