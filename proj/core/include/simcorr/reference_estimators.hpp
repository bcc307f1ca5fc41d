#pragma once

// Classical correlation estimators used as comparison points for the similarity estimator.
// All take bivariate, zero-mean samples.

#include <string_view>

#include "simcorr/sample.hpp"

namespace simcorr {

enum class ReferenceEstimator { sample, fisher_sample, kendall, kendall_greiner, quadrant };

std::string_view to_string(ReferenceEstimator e) noexcept;

struct BenchmarkEstimate {
  double value;  // correlation scale, except fisher_sample which is on the Fisher scale
  ReferenceEstimator estimator;
};

/// sum x1 x2 / sqrt(sum x1^2 sum x2^2). Throws DataError if a column is identically zero.
double sample_correlation(const Sample& sample);
double fisher_sample_correlation(const Sample& sample);

/// Kendall tau-a: ties contribute zero, normalisation 2 / (T (T - 1)). Requires T >= 2.
double kendall_tau(const Sample& sample);

/// sin(pi tau / 2).
double greiner_map(double tau);

/// -cos(pi P) with P the share of rows whose components share a sign; rows with a zero
/// component count one half.
double quadrant_correlation(const Sample& sample);

BenchmarkEstimate estimate(ReferenceEstimator which, const Sample& sample);

}  // namespace simcorr
