#include "simcorr/sample.hpp"

#include <cmath>
#include <string>

#include "simcorr/errors.hpp"
#include "simcorr/numerics.hpp"

namespace simcorr {

Sample::Sample(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (cols_ < 2) throw DataError("sample needs at least two columns");
  if (rows_ < 1) throw DataError("sample is empty");
  if (values_.size() != rows_ * cols_) throw DataError("sample storage does not match its shape");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw DataError("non-finite value at row " + std::to_string(k / cols_) + ", column " +
                      std::to_string(k % cols_));
    }
  }
}

Sample Sample::bivariate(std::span<const double> x1, std::span<const double> x2) {
  if (x1.size() != x2.size()) throw DataError("bivariate sample columns differ in length");
  std::vector<double> values;
  values.reserve(2 * x1.size());
  for (std::size_t t = 0; t < x1.size(); ++t) {
    values.push_back(x1[t]);
    values.push_back(x2[t]);
  }
  return Sample(x1.size(), 2, std::move(values));
}

Sample Sample::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DataError("sample is empty");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].size() != cols) throw DataError("ragged sample at row " + std::to_string(t));
    values.insert(values.end(), rows[t].begin(), rows[t].end());
  }
  return Sample(rows.size(), cols, std::move(values));
}

std::vector<double> Sample::column(std::size_t i) const {
  std::vector<double> out(rows_);
  for (std::size_t t = 0; t < rows_; ++t) out[t] = values_[t * cols_ + i];
  return out;
}

Sample Sample::scaled(double c) const {
  std::vector<double> values = values_;
  for (double& v : values) v *= c;
  return Sample(rows_, cols_, std::move(values));
}

Sample Sample::with_column_scales(std::span<const double> divisors) const {
  if (divisors.size() != cols_) throw DataError("one scale per column is required");
  std::vector<double> values = values_;
  for (std::size_t t = 0; t < rows_; ++t) {
    for (std::size_t i = 0; i < cols_; ++i) values[t * cols_ + i] /= divisors[i];
  }
  return Sample(rows_, cols_, std::move(values));
}

Sample Sample::demeaned() const {
  std::vector<double> values = values_;
  for (std::size_t i = 0; i < cols_; ++i) {
    const auto col = column(i);
    const double mean = numerics::compensated_sum(col) / static_cast<double>(rows_);
    for (std::size_t t = 0; t < rows_; ++t) values[t * cols_ + i] -= mean;
  }
  return Sample(rows_, cols_, std::move(values));
}

}  // namespace simcorr
