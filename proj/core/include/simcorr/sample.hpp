#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace simcorr {

/// A T x n panel of observations stored row-major. Rows are time, columns are series.
///
/// Construction validates the panel: n >= 2, T >= 1 and every entry finite.
/// A bivariate sample is simply a Sample with n == 2.
class Sample {
 public:
  Sample(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Sample bivariate(std::span<const double> x1, std::span<const double> x2);
  static Sample from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_bivariate() const noexcept { return cols_ == 2; }

  std::span<const double> row(std::size_t t) const noexcept {
    return {values_.data() + t * cols_, cols_};
  }
  double operator()(std::size_t t, std::size_t i) const noexcept { return values_[t * cols_ + i]; }

  std::vector<double> column(std::size_t i) const;
  std::span<const double> values() const noexcept { return values_; }

  Sample scaled(double c) const;
  Sample with_column_scales(std::span<const double> divisors) const;
  Sample demeaned() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

}  // namespace simcorr
