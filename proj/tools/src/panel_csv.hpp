#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "simcorr/sample.hpp"

namespace simcorr::cli {

enum class HeaderMode { automatic, present, absent };

struct PanelOptions {
  char delimiter = ',';
  HeaderMode header = HeaderMode::automatic;
};

struct Panel {
  std::vector<std::string> names;
  Sample sample;
};

// Columns are series, rows are dates. In automatic mode the first row is a header when none
// of its cells is numeric. Errors are DataError with 1-based line and column numbers.
Panel parse_panel(std::string_view text, const PanelOptions& options = {});

std::string read_file(const std::filesystem::path& path);

}  // namespace simcorr::cli
