#include "simcorr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "simcorr/errors.hpp"

namespace simcorr::numerics {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

namespace {

constexpr double kShiftThreshold = 6.0;

// B_{2k} for k = 1..11.
constexpr double kBernoulli[] = {
    1.0 / 6.0,       -1.0 / 30.0,          1.0 / 42.0,     -1.0 / 30.0,
    5.0 / 66.0,      -691.0 / 2730.0,      7.0 / 6.0,      -3617.0 / 510.0,
    43867.0 / 798.0, -174611.0 / 330.0,    854513.0 / 138.0};

}  // namespace

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma: argument must be positive");
  double shift = 0.0;
  while (x < kShiftThreshold) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // sum_{k>=1} B_{2k} / (2k x^{2k}), evaluated from the tail up.
  double series = 0.0;
  for (int k = 10; k >= 1; --k) {
    series = (series + kBernoulli[k - 1] / (2.0 * k)) * inv2;
  }
  return shift + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("trigamma: argument must be positive");
  double shift = 0.0;
  while (x < kShiftThreshold) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // sum_{k>=1} B_{2k} / x^{2k+1}
  double series = 0.0;
  for (int k = 10; k >= 1; --k) {
    series = (series + kBernoulli[k - 1]) * inv2;
  }
  series *= inv;
  return shift + inv + 0.5 * inv2 + series;
}

std::complex<double> log_gamma(std::complex<double> z) {
  if (!(z.real() > 0.0)) throw DomainError("log_gamma: requires Re(z) > 0");
  std::complex<double> shift{0.0, 0.0};
  while (std::abs(z) < 15.0) {
    shift -= std::log(z);
    z += 1.0;
  }
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  // sum_k B_{2k} / (2k (2k-1) z^{2k-1})
  std::complex<double> series{0.0, 0.0};
  for (int k = 8; k >= 1; --k) {
    series = series * inv2 + kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0));
  }
  series *= inv;
  return shift + (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double log_sech(double x) noexcept {
  const double a = std::abs(x);
  return std::numbers::ln2 - a - std::log1p(std::exp(-2.0 * a));
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double max_panel, double rel_tol) {
  QuadratureResult result;
  if (b <= a) return result;
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
  const double width = (b - a) / static_cast<double>(panels);
  CompensatedSum total;
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + width * static_cast<double>(k);
    const double hi = (k + 1 == panels) ? b : lo + width;
    double error = 0.0;
    double l1 = 0.0;
    // Boost only stops on relative error, which panels holding a negligible share of the
    // integral cannot reach; accept a single Kronrod pass when it already meets its share
    // of the absolute budget.
    double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        f, lo, hi, 0, rel_tol, &error, &l1);
    const double share = abs_tol / static_cast<double>(panels);
    if (!(error <= share * 1e-3 || error <= rel_tol * l1)) {
      value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, 12, rel_tol,
                                                                            &error, &l1);
    }
    total.add(value);
    result.error_estimate += error;
  }
  result.value = total.value();
  if (!std::isfinite(result.value) || result.error_estimate > 1e3 * abs_tol) {
    std::ostringstream diag;
    diag << "interval=[" << a << ", " << b << "] panels=" << panels
         << " error_estimate=" << result.error_estimate << " tolerance=" << abs_tol;
    throw NumericalError("adaptive quadrature did not converge", diag.str());
  }
  return result;
}

QuadratureResult integrate_real_line(const std::function<double(double)>& f, double abs_tol) {
  double error = 0.0;
  double l1 = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, -inf, inf, 20, 1e-13, &error, &l1);
  if (!std::isfinite(value) || error > 1e3 * abs_tol) {
    std::ostringstream diag;
    diag << "error_estimate=" << error << " tolerance=" << abs_tol;
    throw NumericalError("infinite-range quadrature did not converge", diag.str());
  }
  return {value, error};
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double x_tol) {
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream diag;
    diag << "f(" << lo << ")=" << f_lo << " f(" << hi << ")=" << f_hi;
    throw NumericalError("root is not bracketed", diag.str());
  }
  boost::uintmax_t max_iter = 200;
  auto tol = [x_tol](double a, double b) { return std::abs(b - a) <= x_tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  if (max_iter >= 200) throw NumericalError("root finder exhausted its iteration budget");
  return 0.5 * (a + b);
}

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

SimplexResult run_simplex(const std::function<double(std::span<const double>)>& objective,
                          const std::vector<double>& start, const SimplexOptions& options,
                          std::size_t budget) {
  const std::size_t dim = start.size();
  std::size_t evaluations = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back({start, eval(start)});
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> x = start;
    const double step = options.initial_step * std::max(1.0, std::abs(x[i]));
    x[i] += step;
    simplex.push_back({x, eval(x)});
  }

  bool converged = false;
  std::vector<double> centroid(dim);
  auto blend = [&](double t, const std::vector<double>& towards) {
    std::vector<double> x(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = centroid[j] + t * (towards[j] - centroid[j]);
    return x;
  };

  while (evaluations < budget) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
    const double f_best = simplex.front().f;
    const double f_worst = simplex.back().f;
    double size = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        size = std::max(size, std::abs(simplex[i].x[j] - simplex[0].x[j]));
      }
    }
    if (std::isfinite(f_worst) &&
        f_worst - f_best <= options.f_tol * (1.0 + std::abs(f_best)) && size <= options.x_tol) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i].x[j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    const auto& worst = simplex.back().x;
    auto reflected = blend(-1.0, worst);
    const double f_reflected = eval(reflected);
    if (f_reflected < simplex.front().f) {
      auto expanded = blend(-2.0, worst);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex.back() = {std::move(expanded), f_expanded};
      } else {
        simplex.back() = {std::move(reflected), f_reflected};
      }
      continue;
    }
    if (f_reflected < simplex[dim - 1].f) {
      simplex.back() = {std::move(reflected), f_reflected};
      continue;
    }
    const bool outside = f_reflected < simplex.back().f;
    auto contracted = outside ? blend(-0.5, worst) : blend(0.5, worst);
    const double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, simplex.back().f)) {
      simplex.back() = {std::move(contracted), f_contracted};
      continue;
    }
    // shrink towards the best vertex
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        simplex[i].x[j] = simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
      }
      simplex[i].f = eval(simplex[i].x);
    }
  }
  const auto best = std::min_element(simplex.begin(), simplex.end(),
                                     [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
  return {best->x, best->f, evaluations, converged};
}

}  // namespace

SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& f,
                               std::vector<double> start, const SimplexOptions& options) {
  if (start.empty()) throw DomainError("minimize_simplex: empty start vector");
  SimplexResult best = run_simplex(f, start, options, options.max_evaluations);
  std::size_t used = best.evaluations;
  for (std::size_t r = 0; r < options.restarts && used < options.max_evaluations; ++r) {
    SimplexOptions local = options;
    local.initial_step = options.initial_step * 0.1;
    SimplexResult next = run_simplex(f, best.x, local, options.max_evaluations - used);
    used += next.evaluations;
    const bool improved = next.value < best.value - options.f_tol * (1.0 + std::abs(best.value));
    if (next.value <= best.value) {
      next.evaluations = used;
      best = std::move(next);
    }
    if (!improved) break;
  }
  best.evaluations = used;
  return best;
}

}  // namespace simcorr::numerics
