#include "simcorr/errors.hpp"

namespace simcorr {

const char* to_string(DegenerateLocus locus) noexcept {
  switch (locus) {
    case DegenerateLocus::origin:
      return "origin";
    case DegenerateLocus::equal:
      return "equal";
    case DegenerateLocus::opposite:
      return "opposite";
    case DegenerateLocus::along_ones:
      return "along-ones";
    case DegenerateLocus::orthogonal_to_ones:
      return "orthogonal-to-ones";
  }
  return "unknown";
}

namespace {

std::string describe(DegenerateLocus locus, std::optional<std::size_t> row) {
  std::string msg = "degenerate observation (";
  msg += to_string(locus);
  msg += ")";
  if (row) msg += " at row " + std::to_string(*row);
  return msg;
}

}  // namespace

DegenerateObservation::DegenerateObservation(DegenerateLocus locus, std::optional<std::size_t> row)
    : Error(describe(locus, row)), locus_(locus), row_(row) {}

}  // namespace simcorr
