#include "simcorr/garch.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "simcorr/distributions.hpp"
#include "simcorr/errors.hpp"
#include "simcorr/similarity.hpp"

namespace simcorr {

namespace {

const double kMeanAbsNormal = std::sqrt(2.0 / std::numbers::pi);
const double kLog2Pi = std::log(2.0 * std::numbers::pi);
constexpr double kBoundaryBeta = 0.999;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool all_finite(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

// ---- EGARCH -----------------------------------------------------------------------------

// Log-likelihood, or -inf if the recursion leaves the finite range.
double egarch_ll_unchecked(std::span<const double> r, const EgarchParams& p, double mu, double h0) {
  double log_h = std::log(h0);
  double shock = 0.0;
  double ll = 0.0;
  for (double x : r) {
    log_h = p.alpha + p.beta * log_h + p.kappa * shock;
    if (!(std::abs(log_h) < 700.0)) return kNegInf;
    const double z = (x - mu) * std::exp(-0.5 * log_h);
    ll -= 0.5 * (kLog2Pi + log_h + z * z);
    shock = z + p.eta * (std::abs(z) - kMeanAbsNormal);
  }
  return std::isfinite(ll) ? ll : kNegInf;
}

// ---- correlation stage ------------------------------------------------------------------

// Per-row statistics of the standardized residuals that the likelihood needs.
struct RowStats {
  std::vector<double> along;       // (sum z)^2 / n
  std::vector<double> orthogonal;  // sum (z - mean z)^2
};

RowStats row_stats(const Sample& z) {
  const std::size_t n = z.cols();
  RowStats s;
  s.along.resize(z.rows());
  s.orthogonal.resize(z.rows());
  for (std::size_t t = 0; t < z.rows(); ++t) {
    const auto row = z.row(t);
    const double sum = numerics::compensated_sum(row);
    const double mean = sum / static_cast<double>(n);
    double dev = 0.0;
    for (double v : row) dev += (v - mean) * (v - mean);
    s.along[t] = sum * mean;
    s.orthogonal[t] = dev;
  }
  return s;
}

// log(e^a + n - 1), computed without overflow.
double log_shifted_exp(double a, double n) {
  return a > 0.0 ? a + std::log1p((n - 1.0) * std::exp(-a)) : std::log(n - 1.0) + std::log1p(std::exp(a) / (n - 1.0));
}

double row_log_likelihood(double phi, std::size_t n, double along, double orthogonal) {
  const double nd = static_cast<double>(n);
  const double a = nd * phi;
  if (!(std::abs(a) < 700.0)) return kNegInf;
  const double L = log_shifted_exp(a, nd);
  const double log_n = std::log(nd);
  const double log_minus = log_n - L;      // log(1 - rho)
  const double log_plus = log_n + a - L;   // log(1 + (n - 1) rho)
  const double quad = orthogonal * std::exp(-log_minus) + along * std::exp(-log_plus);
  return -0.5 * (nd * kLog2Pi + (nd - 1.0) * log_minus + log_plus + quad);
}

void run_recursion(std::span<const double> innovation, const CorrParams& p, double phi0,
                   double omega, std::vector<double>& phi) {
  phi.resize(innovation.size());
  double state = phi0;
  double previous = phi0 - omega;
  for (std::size_t t = 0; t < innovation.size(); ++t) {
    state = p.alpha + p.beta * state + p.kappa * previous;
    phi[t] = state;
    previous = innovation[t];
  }
}

struct Innovations {
  std::vector<double> values;
  std::vector<std::size_t> degenerate_rows;
  double mean = 0.0;  // over non-degenerate rows
};

Innovations innovations_of(const Sample& z, std::optional<double> winsorize) {
  if (winsorize && !(*winsorize > 0.0)) throw DomainError("winsorization cap must be positive");
  Innovations in;
  in.values.resize(z.rows());
  numerics::CompensatedSum sum;
  for (std::size_t t = 0; t < z.rows(); ++t) {
    try {
      double v = phi_r(z.row(t));
      if (winsorize) v = std::clamp(v, -*winsorize, *winsorize);
      in.values[t] = v;
      sum.add(v);
    } catch (const DegenerateObservation&) {
      in.values[t] = 0.0;
      in.degenerate_rows.push_back(t);
    }
  }
  const std::size_t valid = z.rows() - in.degenerate_rows.size();
  in.mean = valid > 0 ? sum.value() / static_cast<double>(valid) : 0.0;
  return in;
}

CorrPath corr_filter(const Sample& z, const CorrParams& params, double phi0,
                     std::optional<double> winsorize) {
  params.validate();
  if (!std::isfinite(phi0)) throw DomainError("initial correlation state must be finite");
  const std::size_t n = z.cols();
  Innovations in = innovations_of(z, winsorize);
  CorrPath path;
  run_recursion(in.values, params, phi0, omega_n(n), path.phi);
  path.rho.resize(path.phi.size());
  for (std::size_t t = 0; t < path.phi.size(); ++t) {
    if (!std::isfinite(path.phi[t])) {
      throw NumericalError("correlation filter diverged at row " + std::to_string(t));
    }
    path.rho[t] = equicorr_phi_inverse(path.phi[t], n);
  }
  path.innovation = std::move(in.values);
  path.degenerate_rows = std::move(in.degenerate_rows);
  return path;
}

// ---- estimation helpers -----------------------------------------------------------------

// Standard errors from the inverse numeric Hessian of a negative log-likelihood.
std::vector<double> hessian_standard_errors(const std::function<double(const std::vector<double>&)>& nll,
                                            const std::vector<double>& theta,
                                            const std::vector<double>& max_step) {
  const std::size_t k = theta.size();
  std::vector<double> step(k);
  for (std::size_t i = 0; i < k; ++i) {
    step[i] = std::min(1e-4 * std::max(1.0, std::abs(theta[i])), max_step[i]);
  }
  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    std::vector<double> x = theta;
    x[i] += di;
    x[j] += dj;
    return nll(x);
  };
  const double f0 = nll(theta);
  Eigen::MatrixXd H(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const double hi = step[i];
    H(i, i) = (at(i, hi, i, 0.0) - 2.0 * f0 + at(i, -hi, i, 0.0)) / (hi * hi);
    for (std::size_t j = 0; j < i; ++j) {
      const double hj = step[j];
      const double v = (at(i, hi, j, hj) - at(i, hi, j, -hj) - at(i, -hi, j, hj) + at(i, -hi, j, -hj)) /
                       (4.0 * hi * hj);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  if (!H.allFinite()) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) return {};
  const Eigen::MatrixXd cov = H.inverse();
  std::vector<double> se(k);
  for (std::size_t i = 0; i < k; ++i) se[i] = std::sqrt(cov(i, i));
  return se;
}

// Room left before |beta| reaches 1, used to keep Hessian probes admissible.
double beta_room(double beta) { return std::max(1e-8, 0.5 * (1.0 - std::abs(beta))); }

constexpr double kStartBeta[] = {0.9, 0.95, 0.8, 0.97, 0.6};
constexpr double kStartKappa[] = {0.05, 0.1, 0.15, 0.03, 0.2};
constexpr double kStartEta[] = {0.5, 0.0, 1.0, 0.25, -0.25};

}  // namespace

// ---- public API ---------------------------------------------------------------------------

void EgarchParams::validate() const {
  if (!all_finite({alpha, beta, kappa, eta})) throw DomainError("EGARCH parameters must be finite");
  if (!(std::abs(beta) < 1.0)) throw DomainError("EGARCH persistence must satisfy |beta| < 1");
}

double EgarchParams::unconditional_log_variance() const {
  validate();
  return alpha / (1.0 - beta);
}

EgarchPath egarch_filter(std::span<const double> returns, const EgarchParams& params, double mu,
                         double h0) {
  params.validate();
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw DomainError("h0 must be a positive variance");
  if (!std::isfinite(mu)) throw DomainError("mu must be finite");
  EgarchPath path;
  path.h.resize(returns.size());
  path.z.resize(returns.size());
  double log_h = std::log(h0);
  double shock = 0.0;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    log_h = params.alpha + params.beta * log_h + params.kappa * shock;
    const double h = std::exp(log_h);
    const double z = (returns[t] - mu) / std::sqrt(h);
    if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(z)) {
      throw NumericalError("EGARCH filter left the finite range at index " + std::to_string(t));
    }
    path.h[t] = h;
    path.z[t] = z;
    shock = z + params.eta * (std::abs(z) - kMeanAbsNormal);
  }
  return path;
}

double egarch_log_likelihood(std::span<const double> returns, const EgarchParams& params, double mu,
                             double h0) {
  const EgarchPath path = egarch_filter(returns, params, mu, h0);
  numerics::CompensatedSum ll;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    ll.add(-0.5 * (kLog2Pi + std::log(path.h[t]) + path.z[t] * path.z[t]));
  }
  return ll.value();
}

std::string_view to_string(CorrMode mode) noexcept {
  return mode == CorrMode::bivariate ? "bivariate" : "deco";
}

void CorrParams::validate() const {
  if (!all_finite({alpha, beta, kappa})) throw DomainError("correlation parameters must be finite");
  if (!(std::abs(beta) < 1.0)) throw DomainError("correlation persistence must satisfy |beta| < 1");
}

double CorrParams::unconditional_phi(std::size_t n) const {
  validate();
  if (!(beta + kappa < 1.0)) throw DomainError("beta + kappa must be below 1 for a stationary mean");
  return (alpha - kappa * omega_n(n)) / (1.0 - beta - kappa);
}

CorrPath bivariate_corr_filter(const Sample& z, const CorrParams& params, double phi0,
                               std::optional<double> winsorize) {
  if (z.cols() != 2) throw DataError("the bivariate filter needs exactly two columns");
  return corr_filter(z, params, phi0, winsorize);
}

CorrPath deco_corr_filter(const Sample& z, const CorrParams& params, double phi0,
                          std::optional<double> winsorize) {
  return corr_filter(z, params, phi0, winsorize);
}

double correlation_log_likelihood(const Sample& z, std::span<const double> phi) {
  if (phi.size() != z.rows()) throw DomainError("correlation path length does not match the panel");
  const RowStats s = row_stats(z);
  numerics::CompensatedSum ll;
  for (std::size_t t = 0; t < z.rows(); ++t) {
    ll.add(row_log_likelihood(phi[t], z.cols(), s.along[t], s.orthogonal[t]));
  }
  return ll.value();
}

EgarchFit fit_egarch(std::span<const double> returns, const FitConfig& config) {
  if (returns.size() < 2) throw DataError("EGARCH fit needs at least two observations");
  EgarchFit fit;
  fit.mu = numerics::compensated_sum(returns) / static_cast<double>(returns.size());
  numerics::CompensatedSum ss;
  for (double r : returns) ss.add((r - fit.mu) * (r - fit.mu));
  fit.h0 = ss.value() / static_cast<double>(returns.size());
  if (!(fit.h0 > 0.0)) throw DataError("EGARCH fit: the series has zero variance");

  const double T = static_cast<double>(returns.size());
  auto unpack = [](std::span<const double> x) {
    return EgarchParams{x[0], std::tanh(x[1]), x[2], x[3]};
  };
  auto objective = [&](std::span<const double> x) {
    return -egarch_ll_unchecked(returns, unpack(x), fit.mu, fit.h0) / T;
  };

  const double log_h0 = std::log(fit.h0);
  const std::size_t starts = std::clamp<std::size_t>(config.starts, 1, std::size(kStartBeta));
  numerics::SimplexResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts; ++s) {
    const double beta = kStartBeta[s];
    std::vector<double> x0{(1.0 - beta) * log_h0, std::atanh(beta), kStartKappa[s], kStartEta[s]};
    auto res = numerics::minimize_simplex(objective, x0, config.simplex);
    fit.evaluations += res.evaluations;
    if (res.value < best.value) best = std::move(res);
  }
  if (!std::isfinite(best.value)) {
    throw NumericalError("EGARCH fit: no start produced a finite likelihood");
  }
  fit.params = unpack(best.x);
  fit.log_likelihood = -best.value * T;
  fit.converged = best.converged;
  fit.boundary = std::abs(fit.params.beta) > kBoundaryBeta;

  const std::vector<double> theta{fit.params.alpha, fit.params.beta, fit.params.kappa, fit.params.eta};
  auto nll = [&](const std::vector<double>& th) {
    if (!(std::abs(th[1]) < 1.0)) return std::numeric_limits<double>::infinity();
    return -egarch_ll_unchecked(returns, EgarchParams{th[0], th[1], th[2], th[3]}, fit.mu, fit.h0);
  };
  const double inf = std::numeric_limits<double>::infinity();
  fit.standard_errors = hessian_standard_errors(nll, theta, {inf, beta_room(fit.params.beta), inf, inf});
  return fit;
}

CorrFit fit_correlation(const Sample& z, CorrMode mode, const FitConfig& config) {
  const std::size_t n = z.cols();
  if (mode == CorrMode::bivariate && n != 2) {
    throw DataError("bivariate mode needs exactly two columns, got " + std::to_string(n));
  }
  const Innovations in = innovations_of(z, config.winsorize);
  const RowStats stats = row_stats(z);
  const double omega = omega_n(n);
  const double T = static_cast<double>(z.rows());

  CorrFit fit;
  fit.phi0 = in.mean + omega;

  std::vector<double> phi;
  auto log_likelihood = [&](const CorrParams& p) {
    run_recursion(in.values, p, fit.phi0, omega, phi);
    double ll = 0.0;
    for (std::size_t t = 0; t < phi.size(); ++t) {
      ll += row_log_likelihood(phi[t], n, stats.along[t], stats.orthogonal[t]);
      if (!std::isfinite(ll)) return kNegInf;
    }
    return ll;
  };
  auto objective = [&](std::span<const double> x) {
    return -log_likelihood(CorrParams{x[0], std::tanh(x[1]), x[2]}) / T;
  };

  std::vector<CorrParams> starts;
  if (config.correlation_start) {
    config.correlation_start->validate();
    starts.push_back(*config.correlation_start);
  } else {
    const std::size_t count = std::clamp<std::size_t>(config.starts, 1, std::size(kStartBeta));
    for (std::size_t s = 0; s < count; ++s) {
      const double beta = kStartBeta[s];
      const double kappa = kStartKappa[s] * 0.5;
      starts.push_back({(1.0 - beta - kappa) * fit.phi0 + kappa * omega, beta, kappa});
    }
  }

  numerics::SimplexResult best;
  best.value = std::numeric_limits<double>::infinity();
  fit.start_log_likelihood = kNegInf;
  for (const auto& p : starts) {
    fit.start_log_likelihood = std::max(fit.start_log_likelihood, log_likelihood(p));
    auto res = numerics::minimize_simplex(objective, {p.alpha, std::atanh(p.beta), p.kappa}, config.simplex);
    fit.evaluations += res.evaluations;
    if (res.value < best.value) best = std::move(res);
  }
  if (!std::isfinite(best.value)) {
    throw NumericalError("correlation fit: no start produced a finite likelihood");
  }
  fit.params = {best.x[0], std::tanh(best.x[1]), best.x[2]};
  fit.log_likelihood = -best.value * T;
  fit.converged = best.converged;
  fit.boundary = std::abs(fit.params.beta) > kBoundaryBeta;

  auto nll = [&](const std::vector<double>& th) {
    if (!(std::abs(th[1]) < 1.0)) return std::numeric_limits<double>::infinity();
    return -log_likelihood(CorrParams{th[0], th[1], th[2]});
  };
  const double inf = std::numeric_limits<double>::infinity();
  fit.standard_errors = hessian_standard_errors(
      nll, {fit.params.alpha, fit.params.beta, fit.params.kappa}, {inf, beta_room(fit.params.beta), inf});
  return fit;
}

TwoStepFit fit_two_step(const Sample& panel, const FitConfig& config) {
  const std::size_t n = panel.cols();
  const std::size_t T = panel.rows();
  if (T < config.min_T) {
    throw DataError("GARCH fit needs at least " + std::to_string(config.min_T) + " rows, got " +
                    std::to_string(T));
  }
  if (config.mode == CorrMode::bivariate && n != 2) {
    throw DataError("bivariate mode needs exactly two columns, got " + std::to_string(n));
  }

  TwoStepFit out;
  out.mode = config.mode;
  std::vector<double> z(T * n);
  out.paths.h.resize(n);
  out.paths.z.resize(n);
  double step1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> r = panel.column(i);
    EgarchFit fit = fit_egarch(r, config);
    const EgarchPath path = egarch_filter(r, fit.params, fit.mu, fit.h0);
    for (std::size_t t = 0; t < T; ++t) z[t * n + i] = path.z[t];
    out.paths.h[i] = path.h;
    out.paths.z[i] = path.z;
    step1 += fit.log_likelihood;
    out.assets.push_back(std::move(fit));
  }
  const Sample residuals(T, n, std::move(z));
  out.correlation = fit_correlation(residuals, config.mode, config);
  out.paths.correlation =
      corr_filter(residuals, out.correlation.params, out.correlation.phi0, config.winsorize);
  out.log_likelihood = step1 + out.correlation.log_likelihood;

  bool boundary = out.correlation.boundary;
  out.converged = out.correlation.converged;
  for (const auto& a : out.assets) {
    out.converged = out.converged && a.converged;
    boundary = boundary || a.boundary;
  }
  if (!out.converged) {
    out.status = "optimizer did not converge; best parameters so far are reported";
  } else if (boundary) {
    out.status = "converged at the stationarity boundary";
  } else {
    out.status = "ok";
  }
  return out;
}

SimulatedModel simulate_model(const ModelSpec& spec, std::size_t T, SeededRng& rng,
                              std::size_t burn_in) {
  const std::size_t n = spec.egarch.size();
  if (n < 2) throw DomainError("a correlation model needs at least two assets");
  if (spec.mu.size() != n) throw DomainError("one mean per asset is required");
  if (spec.mode == CorrMode::bivariate && n != 2) throw DomainError("bivariate mode needs two assets");
  if (T < 1) throw DomainError("T must be at least 1");
  for (const auto& p : spec.egarch) p.validate();
  double radial_scale = 0.0;
  switch (spec.innovations) {
    case FamilyKind::gaussian:
      break;
    case FamilyKind::student_t:
      if (!(spec.nu > 2.0)) throw DomainError("Student t innovations need nu > 2 for unit variance");
      radial_scale = spec.nu - 2.0;
      break;
    case FamilyKind::cauchy:
      throw DomainError("Cauchy innovations have no variance to standardize");
  }

  const double nd = static_cast<double>(n);
  const double omega = omega_n(n);
  const CorrParams& cp = spec.correlation;
  double phi = cp.unconditional_phi(n);
  double innovation = phi - omega;
  std::vector<double> log_h(n);
  std::vector<double> shock(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) log_h[i] = spec.egarch[i].unconditional_log_variance();

  SimulatedModel out{Sample(1, n, std::vector<double>(n, 1.0)), std::vector<std::vector<double>>(n), {}, {}};
  std::vector<double> returns;
  returns.reserve(T * n);
  for (auto& h : out.h) h.reserve(T);
  out.phi.reserve(T);
  out.rho.reserve(T);

  std::normal_distribution<double> normal;
  std::chi_squared_distribution<double> chi2(spec.innovations == FamilyKind::student_t ? spec.nu : 1.0);
  std::vector<double> g(n);
  std::vector<double> eps(n);
  for (std::size_t t = 0; t < burn_in + T; ++t) {
    phi = cp.alpha + cp.beta * phi + cp.kappa * innovation;
    const double a = nd * phi;
    const double L = log_shifted_exp(a, nd);
    const double root_minus = std::exp(0.5 * (std::log(nd) - L));
    const double root_plus = std::exp(0.5 * (std::log(nd) + a - L));

    for (double& v : g) v = normal(rng);
    const double eta = spec.innovations == FamilyKind::student_t ? std::sqrt(radial_scale / chi2(rng)) : 1.0;
    const double gbar = std::accumulate(g.begin(), g.end(), 0.0) / nd;
    for (std::size_t i = 0; i < n; ++i) eps[i] = eta * (root_minus * (g[i] - gbar) + root_plus * gbar);
    try {
      innovation = phi_r(eps);
    } catch (const DegenerateObservation&) {
      innovation = 0.0;
    }

    const bool keep = t >= burn_in;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = spec.egarch[i];
      log_h[i] = p.alpha + p.beta * log_h[i] + p.kappa * shock[i];
      const double h = std::exp(log_h[i]);
      shock[i] = eps[i] + p.eta * (std::abs(eps[i]) - kMeanAbsNormal);
      if (keep) {
        returns.push_back(spec.mu[i] + std::sqrt(h) * eps[i]);
        out.h[i].push_back(h);
      }
    }
    if (keep) {
      out.phi.push_back(phi);
      out.rho.push_back(equicorr_phi_inverse(phi, n));
    }
  }
  out.returns = Sample(T, n, std::move(returns));
  return out;
}

}  // namespace simcorr
