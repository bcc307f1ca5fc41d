#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "simcorr/sample.hpp"
#include "simcorr/similarity.hpp"

namespace simcorr {

/// Reproducible random stream. A stream is identified by a master seed and a path of
/// substream indices, so replication r always sees the same numbers regardless of the
/// order in which replications run.
class SeededRng {
 public:
  using result_type = std::mt19937_64::result_type;
  static constexpr std::string_view algorithm = "mt19937_64+seed_seq";

  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const std::uint64_t> path() const noexcept { return path_; }
  SeededRng substream(std::uint64_t index) const;

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  SeededRng(std::uint64_t seed, std::vector<std::uint64_t> path);

  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
};

enum class FamilyKind { gaussian, student_t, cauchy };

std::string_view to_string(FamilyKind kind) noexcept;

struct EllipticalFamily {
  FamilyKind kind = FamilyKind::gaussian;
  double nu = 0.0;  // degrees of freedom; 1 for Cauchy, unused for Gaussian
  Eigen::MatrixXd scatter;

  static EllipticalFamily gaussian(Eigen::MatrixXd scatter);
  static EllipticalFamily student_t(double nu, Eigen::MatrixXd scatter);
  static EllipticalFamily cauchy(Eigen::MatrixXd scatter);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(scatter.rows()); }
  void validate() const;
};

/// sigma^2 [(1 - rho) I + rho 1 1'].
Eigen::MatrixXd build_equicorrelation(double sigma_sq, double rho, std::size_t n);
Eigen::MatrixXd bivariate_scatter(const BivariateCovariance& spec);

/// Draws x = eta * A * g with A the Cholesky factor of the scatter matrix and g standard
/// normal; eta = 1 for the Gaussian family and sqrt(nu / chi2_nu) for Student t.
class EllipticalSampler {
 public:
  explicit EllipticalSampler(EllipticalFamily family);

  const EllipticalFamily& family() const noexcept { return family_; }
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

  void draw(SeededRng& rng, std::span<double> out) const;
  Sample draw(std::size_t T, SeededRng& rng) const;

 private:
  EllipticalFamily family_;
  Eigen::MatrixXd factor_;
};

Sample sample_elliptical(const EllipticalFamily& family, std::size_t T, SeededRng& rng);

enum class StudyEstimator { similarity, fisher_sample, kendall_greiner, quadrant };

std::string_view to_string(StudyEstimator estimator) noexcept;
StudyEstimator parse_study_estimator(std::string_view name);

struct Histogram {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::size_t> counts;
  std::size_t below = 0;
  std::size_t above = 0;

  double bin_width() const noexcept;
  /// Count per bin divided by (total * width), total including the out-of-range tallies.
  std::vector<double> density() const;
};

struct StudyConfig {
  std::size_t T = 8;
  std::size_t replications = 10000;
  std::vector<StudyEstimator> estimators{StudyEstimator::similarity};
  std::vector<double> quantile_levels{0.005, 0.025, 0.05, 0.1, 0.5, 0.9, 0.95, 0.975, 0.995};
  std::size_t histogram_bins = 80;
  double histogram_half_width = 5.0;
  bool keep_values = false;
  std::size_t threads = 1;
};

/// Summary of one estimator over all replications. The raw value lives on the Fisher scale:
/// gamma_hat (+ omega_n) for the similarity estimator, atanh of the correlation estimate for
/// the benchmarks. The standardized statistic is sqrt(T) (raw - phi_target) / scale, where the
/// scale is the exact per-observation standard deviation for the similarity estimator and 1
/// for the benchmarks.
struct EstimatorSummary {
  StudyEstimator estimator = StudyEstimator::similarity;
  double raw_mean = 0.0;
  double raw_variance = 0.0;
  double standardized_mean = 0.0;
  double standardized_variance = 0.0;
  std::vector<double> quantile_levels;
  std::vector<double> quantiles;  // of the standardized statistic
  Histogram histogram;            // of the standardized statistic
  std::vector<double> raw_values;
  std::vector<double> standardized_values;
};

struct StudyResult {
  std::size_t T = 0;
  std::size_t n = 0;
  std::size_t replications = 0;
  std::size_t redraws = 0;
  double target_rho = 0.0;
  double target_phi = 0.0;
  double similarity_scale = 0.0;
  std::uint64_t seed = 0;
  std::vector<EstimatorSummary> estimators;
};

StudyResult mc_sampling_study(const EllipticalFamily& family, const StudyConfig& config,
                              const SeededRng& master);

/// Linear-interpolation empirical quantile of already sorted values.
double empirical_quantile(std::span<const double> sorted, double p);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution.
double kolmogorov_survival(double lambda);
KsResult ks_one_sample(std::vector<double> values, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace simcorr
