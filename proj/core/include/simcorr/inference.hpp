#pragma once

// Interval estimation and testing for correlations through the similarity estimator.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "simcorr/sample.hpp"

namespace simcorr {

enum class Law { automatic, exact, asymptotic };
enum class Target { rho, xi };
enum class Standardization { none, sample_stdev, external_scales };

std::string_view to_string(Law law) noexcept;
std::string_view to_string(Target target) noexcept;

/// Exact law for T <= 100, asymptotic beyond.
Law resolve_law(Law law, std::size_t T) noexcept;

/// Divide every column by sqrt(mean of squares). Throws DataError naming a zero column.
Sample standardize(const Sample& sample);
/// Divide every column by the given positive scale.
Sample standardize(const Sample& sample, std::span<const double> scales);

/// Quantile of the standardized estimator under the resolved law. Exact quantiles are
/// memoised process-wide.
double standardized_quantile(double p, std::size_t T, std::size_t n, Law law);

struct CiOptions {
  double level = 0.95;
  Law law = Law::automatic;
  Target target = Target::rho;
  Standardization standardization = Standardization::none;
  std::vector<double> scales;  // used with Standardization::external_scales
};

struct ConfidenceInterval {
  double lower = 0.0;  // correlation scale
  double upper = 0.0;
  double transformed_lower = 0.0;  // Fisher scale (n = 2) or log-matrix scale (n > 2)
  double transformed_upper = 0.0;
  double center = 0.0;  // gamma_hat, plus omega_n when n > 2
  double point = 0.0;   // center mapped back to the correlation scale
  double level = 0.0;
  Law law = Law::exact;  // never automatic
  Target target = Target::rho;
  std::size_t T = 0;
  std::size_t n = 0;
  /// Interval targets xi; it is conservative because the estimator variance is at most pi^2/4.
  bool conservative = false;
  /// Columns were scaled by sample standard deviations, so variance homogeneity holds only
  /// approximately and the finite-T law is no longer exact.
  bool approximately_exact = false;
};

/// Confidence interval for rho (bivariate or equicorrelation) or for xi (bivariate only).
ConfidenceInterval correlation_ci(const Sample& sample, const CiOptions& options);

struct ZeroCorrelationTest {
  double statistic = 0.0;  // standardized estimator under rho = 0
  double p_value = 1.0;
  bool reject = false;
  double level = 0.0;
  Law law = Law::exact;
};

ZeroCorrelationTest zero_correlation_test(const Sample& sample, double level,
                                          Law law = Law::exact);

}  // namespace simcorr
