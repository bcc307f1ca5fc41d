#include "simcorr/reference_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "simcorr/errors.hpp"
#include "simcorr/numerics.hpp"
#include "simcorr/similarity.hpp"

namespace simcorr {

namespace {

void require_bivariate(const Sample& sample, const char* op) {
  if (!sample.is_bivariate()) throw DataError(std::string(op) + ": bivariate sample required");
}

int sign(double x) noexcept { return (x > 0.0) - (x < 0.0); }

}  // namespace

std::string_view to_string(ReferenceEstimator e) noexcept {
  switch (e) {
    case ReferenceEstimator::sample:
      return "sample";
    case ReferenceEstimator::fisher_sample:
      return "fisher-sample";
    case ReferenceEstimator::kendall:
      return "kendall";
    case ReferenceEstimator::kendall_greiner:
      return "kendall-greiner";
    case ReferenceEstimator::quadrant:
      return "quadrant";
  }
  return "unknown";
}

double sample_correlation(const Sample& sample) {
  require_bivariate(sample, "sample_correlation");
  numerics::CompensatedSum s11;
  numerics::CompensatedSum s22;
  numerics::CompensatedSum s12;
  for (std::size_t t = 0; t < sample.rows(); ++t) {
    const double a = sample(t, 0);
    const double b = sample(t, 1);
    s11.add(a * a);
    s22.add(b * b);
    s12.add(a * b);
  }
  if (!(s11.value() > 0.0)) throw DataError("sample_correlation: column 0 is identically zero");
  if (!(s22.value() > 0.0)) throw DataError("sample_correlation: column 1 is identically zero");
  const double r = s12.value() / std::sqrt(s11.value() * s22.value());
  return std::clamp(r, -1.0, 1.0);
}

double fisher_sample_correlation(const Sample& sample) {
  const double r = sample_correlation(sample);
  if (std::abs(r) >= 1.0) throw DomainError("fisher_sample_correlation: perfect correlation");
  return fisher(r);
}

double kendall_tau(const Sample& sample) {
  require_bivariate(sample, "kendall_tau");
  const std::size_t T = sample.rows();
  if (T < 2) throw DataError("kendall_tau: at least two observations are required");
  long long concordance = 0;
  for (std::size_t i = 0; i < T; ++i) {
    for (std::size_t j = i + 1; j < T; ++j) {
      concordance += sign(sample(i, 0) - sample(j, 0)) * sign(sample(i, 1) - sample(j, 1));
    }
  }
  const double pairs = 0.5 * static_cast<double>(T) * static_cast<double>(T - 1);
  return static_cast<double>(concordance) / pairs;
}

double greiner_map(double tau) {
  if (!(std::abs(tau) <= 1.0)) throw DomainError("greiner_map: tau must lie in [-1, 1]");
  return std::sin(std::numbers::pi * tau / 2.0);
}

double quadrant_correlation(const Sample& sample) {
  require_bivariate(sample, "quadrant_correlation");
  double same = 0.0;
  for (std::size_t t = 0; t < sample.rows(); ++t) {
    const int s = sign(sample(t, 0)) * sign(sample(t, 1));
    same += s > 0 ? 1.0 : (s == 0 ? 0.5 : 0.0);
  }
  const double p = same / static_cast<double>(sample.rows());
  return -std::cos(std::numbers::pi * p);
}

BenchmarkEstimate estimate(ReferenceEstimator which, const Sample& sample) {
  switch (which) {
    case ReferenceEstimator::sample:
      return {sample_correlation(sample), which};
    case ReferenceEstimator::fisher_sample:
      return {fisher_sample_correlation(sample), which};
    case ReferenceEstimator::kendall:
      return {kendall_tau(sample), which};
    case ReferenceEstimator::kendall_greiner:
      return {greiner_map(kendall_tau(sample)), which};
    case ReferenceEstimator::quadrant:
      return {quadrant_correlation(sample), which};
  }
  throw DomainError("unknown reference estimator");
}

}  // namespace simcorr
