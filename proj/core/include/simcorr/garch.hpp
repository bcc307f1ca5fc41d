#pragma once

// Two-step robust correlation GARCH: EGARCH(1,1) variances per asset and a Fisher-scale
// (bivariate) or log-matrix equicorrelation (DECO) recursion driven by phi_r.
//
// Timing convention: the filters take pre-sample values. h0 is log-variance state before
// the first observation with a zero pre-sample shock, so log h[0] = alpha + beta log h0.
// phi0 is the pre-sample correlation state and its pre-sample innovation is its own
// expectation, phi0 - omega_n, which keeps a constant state constant.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simcorr/numerics.hpp"
#include "simcorr/sample.hpp"
#include "simcorr/simulation.hpp"

namespace simcorr {

struct EgarchParams {
  double alpha = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
  double eta = 0.0;

  void validate() const;
  /// alpha / (1 - beta): the stationary mean of log h.
  double unconditional_log_variance() const;
};

struct EgarchPath {
  std::vector<double> h;
  std::vector<double> z;
};

EgarchPath egarch_filter(std::span<const double> returns, const EgarchParams& params, double mu,
                         double h0);

/// Gaussian quasi log-likelihood of an EGARCH path.
double egarch_log_likelihood(std::span<const double> returns, const EgarchParams& params,
                             double mu, double h0);

enum class CorrMode { bivariate, deco };

std::string_view to_string(CorrMode mode) noexcept;

struct CorrParams {
  double alpha = 0.0;
  double beta = 0.0;
  double kappa = 0.0;

  void validate() const;
  /// Stationary mean of phi_rho: (alpha - kappa omega_n) / (1 - beta - kappa).
  double unconditional_phi(std::size_t n) const;
};

struct CorrPath {
  std::vector<double> phi;
  std::vector<double> rho;
  std::vector<double> innovation;  // phi_r of each row, 0 on degenerate rows
  std::vector<std::size_t> degenerate_rows;
};

CorrPath bivariate_corr_filter(const Sample& z, const CorrParams& params, double phi0,
                               std::optional<double> winsorize = std::nullopt);
CorrPath deco_corr_filter(const Sample& z, const CorrParams& params, double phi0,
                          std::optional<double> winsorize = std::nullopt);

/// Gaussian log-likelihood of standardized residuals under equicorrelation C_t with
/// off-diagonal log-matrix element phi_t (any n >= 2; n = 2 is the bivariate model).
double correlation_log_likelihood(const Sample& z, std::span<const double> phi);

struct FitConfig {
  CorrMode mode = CorrMode::bivariate;
  std::size_t min_T = 100;
  std::size_t starts = 5;
  std::optional<double> winsorize;
  std::optional<CorrParams> correlation_start;  // replaces the deterministic starts
  numerics::SimplexOptions simplex{.max_evaluations = 6000,
                                   .f_tol = 1e-12,
                                   .x_tol = 1e-7,
                                   .initial_step = 0.1,
                                   .restarts = 2};
};

struct EgarchFit {
  EgarchParams params;
  double mu = 0.0;
  double h0 = 0.0;
  double log_likelihood = 0.0;
  std::vector<double> standard_errors;  // alpha, beta, kappa, eta; empty when unavailable
  bool converged = false;
  bool boundary = false;
  std::size_t evaluations = 0;
};

struct CorrFit {
  CorrParams params;
  double phi0 = 0.0;
  double log_likelihood = 0.0;
  double start_log_likelihood = 0.0;
  std::vector<double> standard_errors;  // alpha, beta, kappa; empty when unavailable
  bool converged = false;
  bool boundary = false;
  std::size_t evaluations = 0;
};

struct FilteredPaths {
  std::vector<std::vector<double>> h;  // per asset
  std::vector<std::vector<double>> z;  // per asset, standardized residuals
  CorrPath correlation;
};

struct TwoStepFit {
  CorrMode mode = CorrMode::bivariate;
  std::vector<EgarchFit> assets;
  CorrFit correlation;
  FilteredPaths paths;
  double log_likelihood = 0.0;  // step 1 total plus step 2
  bool converged = false;
  std::string status;
};

/// Step 1 fits each asset by Gaussian QML EGARCH; step 2 fits the correlation recursion on the
/// standardized residuals. Optimizer trouble is reported through flags rather than thrown.
TwoStepFit fit_two_step(const Sample& panel, const FitConfig& config = {});

EgarchFit fit_egarch(std::span<const double> returns, const FitConfig& config = {});
CorrFit fit_correlation(const Sample& z, CorrMode mode, const FitConfig& config = {});

struct ModelSpec {
  CorrMode mode = CorrMode::bivariate;
  std::vector<EgarchParams> egarch;  // one per asset
  std::vector<double> mu;            // one per asset
  CorrParams correlation;
  FamilyKind innovations = FamilyKind::gaussian;
  double nu = 0.0;  // Student t degrees of freedom, must exceed 2
};

struct SimulatedModel {
  Sample returns;
  std::vector<std::vector<double>> h;
  std::vector<double> phi;
  std::vector<double> rho;
};

/// Simulates returns from the model; the states start at their stationary means and the first
/// burn_in draws are discarded.
SimulatedModel simulate_model(const ModelSpec& spec, std::size_t T, SeededRng& rng,
                              std::size_t burn_in = 500);

}  // namespace simcorr
