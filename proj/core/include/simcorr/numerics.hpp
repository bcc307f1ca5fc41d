#pragma once

// Numerical building blocks shared by the distribution, inference and GARCH code.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace simcorr::numerics {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> xs) noexcept;

/// Digamma via recurrence shift to x >= 6 followed by the asymptotic series. Requires x > 0.
double digamma(double x);
/// Trigamma, same scheme. Requires x > 0.
double trigamma(double x);
/// Principal-branch-continuous log-gamma for Re(z) > 0 (Stirling series after upward shift).
std::complex<double> log_gamma(std::complex<double> z);

double normal_cdf(double z) noexcept;
double normal_quantile(double p);

/// log(sech(x)) without overflow.
double log_sech(double x) noexcept;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod over [a, b], split into panels no wider than `max_panel`.
/// Throws NumericalError when the summed error estimate exceeds `abs_tol` by a wide margin.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double max_panel, double rel_tol = 1e-13);

/// Integral over the whole real line, mapped through x = t / (1 - t^2).
QuadratureResult integrate_real_line(const std::function<double(double)>& f, double abs_tol);

/// Bracketing root of a monotone function on [lo, hi] (TOMS 748), to `x_tol` in x.
double find_root(const std::function<double(double)>& f, double lo, double hi, double x_tol);

struct SimplexOptions {
  std::size_t max_evaluations = 20000;
  double f_tol = 1e-11;
  double x_tol = 1e-9;
  double initial_step = 0.1;
  std::size_t restarts = 3;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead minimizer. Restarts from the best vertex until a restart no longer improves it.
SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& f,
                               std::vector<double> start, const SimplexOptions& options = {});

}  // namespace simcorr::numerics
