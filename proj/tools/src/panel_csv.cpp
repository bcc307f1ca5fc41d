#include "panel_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "simcorr/errors.hpp"

namespace simcorr::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delimiter, start);
    cells.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return value;
}

[[noreturn]] void fail(std::size_t line, std::size_t column, const std::string& message) {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << message;
  throw DataError(os.str());
}

}  // namespace

Panel parse_panel(std::string_view text, const PanelOptions& options) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (line.ends_with('\r')) line.remove_suffix(1);
    ++number;
    if (!trim(line).empty()) lines.emplace_back(number, line);
    start = end + 1;
  }
  if (lines.empty()) throw DataError("the panel file is empty");

  std::vector<std::string> names;
  std::size_t first_data = 0;
  const auto header_cells = split(lines.front().second, options.delimiter);
  bool has_header = options.header == HeaderMode::present;
  if (options.header == HeaderMode::automatic) {
    has_header = true;
    for (auto cell : header_cells) {
      if (parse_number(cell)) {
        has_header = false;
        break;
      }
    }
  }
  if (has_header) {
    for (auto cell : header_cells) names.emplace_back(unquote(cell));
    first_data = 1;
  }

  const std::size_t n = header_cells.size();
  std::vector<double> values;
  for (std::size_t r = first_data; r < lines.size(); ++r) {
    const auto [line_no, line] = lines[r];
    const auto cells = split(line, options.delimiter);
    if (cells.size() != n) {
      fail(line_no, std::min(cells.size(), n) + 1,
           "expected " + std::to_string(n) + " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < n; ++c) {
      const auto v = parse_number(cells[c]);
      if (!v) fail(line_no, c + 1, "cannot parse '" + std::string(cells[c]) + "' as a number");
      if (!std::isfinite(*v)) fail(line_no, c + 1, "value is not finite");
      values.push_back(*v);
    }
  }
  const std::size_t T = n == 0 ? 0 : values.size() / n;
  if (T < 1) throw DataError("the panel has no data rows");
  if (n < 2) throw DataError("the panel needs at least two columns, found " + std::to_string(n));
  if (names.empty()) {
    for (std::size_t c = 0; c < n; ++c) names.push_back("x" + std::to_string(c + 1));
  }
  return Panel{std::move(names), Sample(T, n, std::move(values))};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace simcorr::cli
