#include "simcorr/inference.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "simcorr/distributions.hpp"
#include "simcorr/errors.hpp"
#include "simcorr/numerics.hpp"
#include "simcorr/similarity.hpp"

namespace simcorr {

namespace {

constexpr std::size_t kExactLawMaxT = 100;

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
}

double unit_scale(std::size_t n) {
  return n == 2 ? std::numbers::pi / 2.0 : std::sqrt(logistic_beta_variance(n));
}

double exact_quantile_cached(double p, std::size_t T, std::size_t n) {
  using Key = std::tuple<std::size_t, std::size_t, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, double> cache;
  const Key key{T, n, std::bit_cast<std::uint64_t>(p)};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double q = FiniteSampleLaw(T, n).quantile(p);
  std::lock_guard lock(mutex);
  cache.emplace(key, q);
  return q;
}

}  // namespace

std::string_view to_string(Law law) noexcept {
  switch (law) {
    case Law::automatic:
      return "automatic";
    case Law::exact:
      return "exact";
    case Law::asymptotic:
      return "asymptotic";
  }
  return "unknown";
}

std::string_view to_string(Target target) noexcept {
  return target == Target::rho ? "rho" : "xi";
}

Law resolve_law(Law law, std::size_t T) noexcept {
  if (law != Law::automatic) return law;
  return T <= kExactLawMaxT ? Law::exact : Law::asymptotic;
}

Sample standardize(const Sample& sample) {
  std::vector<double> scales(sample.cols());
  for (std::size_t i = 0; i < sample.cols(); ++i) {
    numerics::CompensatedSum sq;
    for (std::size_t t = 0; t < sample.rows(); ++t) sq.add(sample(t, i) * sample(t, i));
    const double s = std::sqrt(sq.value() / static_cast<double>(sample.rows()));
    if (!(s > 0.0)) throw DataError("standardize: column " + std::to_string(i) + " has zero dispersion");
    scales[i] = s;
  }
  return sample.with_column_scales(scales);
}

Sample standardize(const Sample& sample, std::span<const double> scales) {
  if (scales.size() != sample.cols()) {
    throw DataError("standardize: expected " + std::to_string(sample.cols()) + " scales, got " +
                    std::to_string(scales.size()));
  }
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || !std::isfinite(scales[i])) {
      throw DataError("standardize: scale for column " + std::to_string(i) + " must be positive");
    }
  }
  return sample.with_column_scales(scales);
}

double standardized_quantile(double p, std::size_t T, std::size_t n, Law law) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
  if (resolve_law(law, T) == Law::asymptotic) return numerics::normal_quantile(p);
  return exact_quantile_cached(p, T, n);
}

ConfidenceInterval correlation_ci(const Sample& sample, const CiOptions& options) {
  require_level(options.level);
  const std::size_t n = sample.cols();
  if (options.target == Target::xi && n != 2) {
    throw DomainError("the resemblance coefficient target is defined for bivariate samples only");
  }

  ConfidenceInterval ci;
  const Sample* data = &sample;
  Sample scaled = sample;
  switch (options.standardization) {
    case Standardization::none:
      break;
    case Standardization::sample_stdev:
      scaled = standardize(sample);
      data = &scaled;
      ci.approximately_exact = options.target == Target::rho;
      break;
    case Standardization::external_scales:
      scaled = standardize(sample, options.scales);
      data = &scaled;
      break;
  }

  const SimilarityEstimate est = gamma_hat_bias_corrected(*data);
  ci.T = est.T;
  ci.n = n;
  ci.level = options.level;
  ci.target = options.target;
  ci.law = resolve_law(options.law, est.T);
  ci.conservative = options.target == Target::xi;
  ci.center = est.gamma_hat;

  const double upper_p = 0.5 * (1.0 + options.level);
  const double lower_p = 0.5 * (1.0 - options.level);
  const double q_hi = standardized_quantile(upper_p, est.T, n, ci.law);
  const double q_lo = (n == 2 || ci.law == Law::asymptotic)
                          ? -q_hi
                          : standardized_quantile(lower_p, est.T, n, ci.law);
  const double step = unit_scale(n) / std::sqrt(static_cast<double>(est.T));
  ci.transformed_lower = ci.center - q_hi * step;
  ci.transformed_upper = ci.center - q_lo * step;
  ci.lower = equicorr_phi_inverse(ci.transformed_lower, n);
  ci.upper = equicorr_phi_inverse(ci.transformed_upper, n);
  ci.point = equicorr_phi_inverse(ci.center, n);
  return ci;
}

ZeroCorrelationTest zero_correlation_test(const Sample& sample, double level, Law law) {
  require_level(level);
  const std::size_t n = sample.cols();
  const SimilarityEstimate est = gamma_hat_bias_corrected(sample);
  ZeroCorrelationTest test;
  test.level = level;
  test.law = resolve_law(law, est.T);
  test.statistic = std::sqrt(static_cast<double>(est.T)) * est.gamma_hat / unit_scale(n);
  double lower_tail = 0.0;
  if (test.law == Law::exact) {
    lower_tail = FiniteSampleLaw(est.T, n).cdf(test.statistic);
  } else {
    lower_tail = numerics::normal_cdf(test.statistic);
  }
  test.p_value = std::min(1.0, 2.0 * std::min(lower_tail, 1.0 - lower_tail));
  test.reject = test.p_value < level;
  return test;
}

}  // namespace simcorr
