#include "simcorr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "simcorr/distributions.hpp"
#include "simcorr/errors.hpp"
#include "simcorr/numerics.hpp"
#include "simcorr/reference_estimators.hpp"

namespace simcorr {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, const std::vector<std::uint64_t>& path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (path.size() + 1));
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto p : path) push(p);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

// Largest |x| such that atanh stays finite for a correlation estimate.
constexpr double kCorrelationClamp = 1.0 - 1e-15;

double fisher_clamped(double r) {
  return std::atanh(std::clamp(r, -kCorrelationClamp, kCorrelationClamp));
}

struct Targets {
  double rho;
  double phi;
  double scale;
};

Targets study_targets(const Eigen::MatrixXd& scatter) {
  const auto n = static_cast<std::size_t>(scatter.rows());
  if (n == 2) {
    const BivariateCovariance spec{scatter(0, 0), scatter(1, 1), scatter(0, 1)};
    return {spec.correlation(), fisher(spec.resemblance()), std::sqrt(hetero_variance(spec))};
  }
  const double var = scatter(0, 0);
  const double cov = scatter(0, 1);
  const double tol = 1e-12 * var;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double expected = i == j ? var : cov;
      if (std::abs(scatter(i, j) - expected) > tol) {
        throw DomainError("multivariate studies require an equicorrelation scatter matrix");
      }
    }
  }
  const double rho = cov / var;
  return {rho, equicorr_phi(rho, n), std::sqrt(logistic_beta_variance(n))};
}

double mean_of(std::span<const double> xs) {
  return numerics::compensated_sum(xs) / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs, double mean) {
  numerics::CompensatedSum s;
  for (double x : xs) s.add((x - mean) * (x - mean));
  return xs.size() > 1 ? s.value() / static_cast<double>(xs.size() - 1) : 0.0;
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) : SeededRng(seed, {}) {}

SeededRng::SeededRng(std::uint64_t seed, std::vector<std::uint64_t> path)
    : seed_(seed), path_(std::move(path)), engine_(make_engine(seed_, path_)) {}

SeededRng SeededRng::substream(std::uint64_t index) const {
  auto path = path_;
  path.push_back(index);
  return SeededRng(seed_, std::move(path));
}

std::string_view to_string(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::gaussian:
      return "gaussian";
    case FamilyKind::student_t:
      return "student-t";
    case FamilyKind::cauchy:
      return "cauchy";
  }
  return "unknown";
}

EllipticalFamily EllipticalFamily::gaussian(Eigen::MatrixXd scatter) {
  return {FamilyKind::gaussian, 0.0, std::move(scatter)};
}

EllipticalFamily EllipticalFamily::student_t(double nu, Eigen::MatrixXd scatter) {
  return {FamilyKind::student_t, nu, std::move(scatter)};
}

EllipticalFamily EllipticalFamily::cauchy(Eigen::MatrixXd scatter) {
  return {FamilyKind::cauchy, 1.0, std::move(scatter)};
}

void EllipticalFamily::validate() const {
  if (scatter.rows() < 2 || scatter.rows() != scatter.cols()) {
    throw DomainError("scatter matrix must be square with dimension at least 2");
  }
  if (!scatter.allFinite() || !scatter.isApprox(scatter.transpose(), 0.0)) {
    throw DomainError("scatter matrix must be finite and symmetric");
  }
  if (kind != FamilyKind::gaussian && !(nu > 0.0 && std::isfinite(nu))) {
    throw DomainError("degrees of freedom must be positive");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(scatter).info() != Eigen::Success) {
    throw DomainError("scatter matrix must be positive definite");
  }
}

Eigen::MatrixXd build_equicorrelation(double sigma_sq, double rho, std::size_t n) {
  EquicorrelationCovariance{sigma_sq, rho, n}.validate();
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, sigma_sq * rho);
  m.diagonal().setConstant(sigma_sq);
  return m;
}

Eigen::MatrixXd bivariate_scatter(const BivariateCovariance& spec) {
  spec.validate();
  Eigen::MatrixXd m(2, 2);
  m << spec.sigma1_sq, spec.sigma12, spec.sigma12, spec.sigma2_sq;
  return m;
}

EllipticalSampler::EllipticalSampler(EllipticalFamily family) : family_(std::move(family)) {
  family_.validate();
  factor_ = Eigen::LLT<Eigen::MatrixXd>(family_.scatter).matrixL();
}

void EllipticalSampler::draw(SeededRng& rng, std::span<double> out) const {
  const auto n = family_.dimension();
  std::normal_distribution<double> normal;
  Eigen::VectorXd g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = normal(rng);
  double eta = 1.0;
  if (family_.kind != FamilyKind::gaussian) {
    std::chi_squared_distribution<double> chi2(family_.nu);
    eta = std::sqrt(family_.nu / chi2(rng));
  }
  Eigen::VectorXd x = factor_.triangularView<Eigen::Lower>() * g;
  x *= eta;
  std::copy(x.data(), x.data() + n, out.begin());
}

Sample EllipticalSampler::draw(std::size_t T, SeededRng& rng) const {
  const auto n = family_.dimension();
  std::vector<double> values(T * n);
  for (std::size_t t = 0; t < T; ++t) draw(rng, std::span<double>(values).subspan(t * n, n));
  return Sample(T, n, std::move(values));
}

Sample sample_elliptical(const EllipticalFamily& family, std::size_t T, SeededRng& rng) {
  return EllipticalSampler(family).draw(T, rng);
}

std::string_view to_string(StudyEstimator estimator) noexcept {
  switch (estimator) {
    case StudyEstimator::similarity:
      return "similarity";
    case StudyEstimator::fisher_sample:
      return "fisher-sample";
    case StudyEstimator::kendall_greiner:
      return "kendall-greiner";
    case StudyEstimator::quadrant:
      return "quadrant";
  }
  return "unknown";
}

StudyEstimator parse_study_estimator(std::string_view name) {
  for (auto e : {StudyEstimator::similarity, StudyEstimator::fisher_sample,
                 StudyEstimator::kendall_greiner, StudyEstimator::quadrant}) {
    if (to_string(e) == name) return e;
  }
  throw DomainError("unknown estimator '" + std::string(name) + "'");
}

double Histogram::bin_width() const noexcept {
  return counts.empty() ? 0.0 : (upper - lower) / static_cast<double>(counts.size());
}

std::vector<double> Histogram::density() const {
  std::size_t total = below + above;
  for (auto c : counts) total += c;
  std::vector<double> d(counts.size(), 0.0);
  if (total == 0) return d;
  const double norm = static_cast<double>(total) * bin_width();
  for (std::size_t i = 0; i < counts.size(); ++i) d[i] = static_cast<double>(counts[i]) / norm;
  return d;
}

StudyResult mc_sampling_study(const EllipticalFamily& family, const StudyConfig& config,
                              const SeededRng& master) {
  if (config.replications < 100) throw DomainError("a sampling study needs at least 100 replications");
  if (config.T < 1) throw DomainError("sample size must be at least 1");
  if (config.estimators.empty()) throw DomainError("no estimators requested");
  const EllipticalSampler sampler(family);
  const std::size_t n = family.dimension();
  for (auto e : config.estimators) {
    if (e != StudyEstimator::similarity && n != 2) {
      throw DomainError(std::string(to_string(e)) + " is a bivariate estimator");
    }
    if ((e == StudyEstimator::fisher_sample || e == StudyEstimator::kendall_greiner) && config.T < 2) {
      throw DomainError(std::string(to_string(e)) + " needs T >= 2");
    }
  }
  for (double p : config.quantile_levels) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile levels must lie in (0, 1)");
  }

  const Targets target = study_targets(family.scatter);
  const double target_fisher = fisher(target.rho);
  const double root_t = std::sqrt(static_cast<double>(config.T));
  const double omega = omega_n(n);
  const std::size_t k = config.estimators.size();
  const std::size_t reps = config.replications;

  std::vector<double> raw(reps * k);
  std::vector<std::size_t> redraws(reps, 0);

  auto run_one = [&](std::size_t r) {
    const SeededRng stream = master.substream(r);
    for (std::uint64_t attempt = 0;; ++attempt) {
      SeededRng rng = stream.substream(attempt);
      const Sample s = sampler.draw(config.T, rng);
      try {
        for (std::size_t j = 0; j < k; ++j) {
          double v = 0.0;
          switch (config.estimators[j]) {
            case StudyEstimator::similarity:
              v = gamma_hat(s).gamma_hat + omega;
              break;
            case StudyEstimator::fisher_sample:
              v = fisher_clamped(sample_correlation(s));
              break;
            case StudyEstimator::kendall_greiner:
              v = fisher_clamped(greiner_map(kendall_tau(s)));
              break;
            case StudyEstimator::quadrant:
              v = fisher_clamped(quadrant_correlation(s));
              break;
          }
          raw[r * k + j] = v;
        }
        redraws[r] = attempt;
        return;
      } catch (const DegenerateObservation&) {
      } catch (const DataError&) {
      }
      if (attempt > 1000) throw NumericalError("sampling study: persistent degenerate draws");
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(config.threads, reps));
  if (threads == 1) {
    for (std::size_t r = 0; r < reps; ++r) run_one(r);
  } else {
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < reps; r += threads) run_one(r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  StudyResult result;
  result.T = config.T;
  result.n = n;
  result.replications = reps;
  for (auto d : redraws) result.redraws += d;
  result.target_rho = target.rho;
  result.target_phi = target.phi;
  result.similarity_scale = target.scale;
  result.seed = master.seed();

  for (std::size_t j = 0; j < k; ++j) {
    EstimatorSummary summary;
    summary.estimator = config.estimators[j];
    const bool is_similarity = summary.estimator == StudyEstimator::similarity;
    const double center = is_similarity ? target.phi : target_fisher;
    const double scale = is_similarity ? target.scale : 1.0;

    std::vector<double> values(reps);
    std::vector<double> standardized(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      values[r] = raw[r * k + j];
      standardized[r] = root_t * (values[r] - center) / scale;
    }
    summary.raw_mean = mean_of(values);
    summary.raw_variance = variance_of(values, summary.raw_mean);
    summary.standardized_mean = mean_of(standardized);
    summary.standardized_variance = variance_of(standardized, summary.standardized_mean);

    Histogram& h = summary.histogram;
    h.lower = -config.histogram_half_width;
    h.upper = config.histogram_half_width;
    h.counts.assign(config.histogram_bins, 0);
    for (double z : standardized) {
      if (z < h.lower) {
        ++h.below;
      } else if (z >= h.upper) {
        ++h.above;
      } else {
        auto bin = static_cast<std::size_t>((z - h.lower) / h.bin_width());
        ++h.counts[std::min(bin, h.counts.size() - 1)];
      }
    }

    std::vector<double> sorted = standardized;
    std::sort(sorted.begin(), sorted.end());
    summary.quantile_levels = config.quantile_levels;
    for (double p : config.quantile_levels) summary.quantiles.push_back(empirical_quantile(sorted, p));

    if (config.keep_values) {
      summary.raw_values = std::move(values);
      summary.standardized_values = std::move(standardized);
    }
    result.estimators.push_back(std::move(summary));
  }
  return result;
}

double empirical_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-theta form converges fast for small arguments.
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      s += std::exp(-m * m * c);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_one_sample(std::vector<double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw DomainError("KS test on an empty sample");
  std::sort(values.begin(), values.end());
  const double m = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return {d, ks_p_value(d, m)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS test on an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb))};
}

}  // namespace simcorr
