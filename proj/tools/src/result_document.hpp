#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace simcorr::cli {

using Json = nlohmann::ordered_json;

/// The JSON object every command emits. Key order is fixed so output is byte-stable.
struct ResultDocument {
  std::string command;
  std::string inputs_digest;
  std::optional<std::uint64_t> seed;
  Json parameters = Json::object();
  Json estimates = Json::object();
  Json intervals = Json::object();
  Json paths = Json::object();
  Json diagnostics = Json::object();

  Json to_json() const;
};

/// Serializes with every floating value written to 17 significant digits; non-finite
/// values become null.
std::string dump(const Json& value, int indent = 2);

std::string sha256_hex(std::string_view bytes);

/// Writes to a sibling temporary file and renames it over the target.
void write_atomically(const std::filesystem::path& path, std::string_view contents);

std::string_view tool_version() noexcept;

}  // namespace simcorr::cli
