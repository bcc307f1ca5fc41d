#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace simcorr {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (|rho| >= 1, p outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data is unusable: empty sample, zero-dispersion column, ragged panel, parse failure.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A quadrature, root-finder or optimizer failed to reach its tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::string diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

/// Where an observation sits on the set where the similarity measure is undefined.
enum class DegenerateLocus {
  origin,             // x == 0
  equal,              // x1 == x2, resemblance +1
  opposite,           // x1 == -x2, resemblance -1
  along_ones,         // x proportional to the vector of ones
  orthogonal_to_ones  // components sum to zero
};

const char* to_string(DegenerateLocus locus) noexcept;

class DegenerateObservation : public Error {
 public:
  DegenerateObservation(DegenerateLocus locus, std::optional<std::size_t> row = std::nullopt);

  DegenerateLocus locus() const noexcept { return locus_; }
  /// Zero-based row of the offending observation when raised from a sample-level estimator.
  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  DegenerateLocus locus_;
  std::optional<std::size_t> row_;
};

}  // namespace simcorr
