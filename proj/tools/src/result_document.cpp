#include "result_document.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <openssl/evp.h>
#include <unistd.h>

#include "simcorr/errors.hpp"

#ifndef SIMCORR_VERSION
#define SIMCORR_VERSION "unknown"
#endif

namespace simcorr::cli {

namespace {

void write_string(std::ostringstream& out, const std::string& s) {
  // nlohmann handles escaping of strings correctly; reuse it.
  out << Json(s).dump();
}

void write_number(std::ostringstream& out, double v) {
  if (!std::isfinite(v)) {
    out << "null";
    return;
  }
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  std::string_view text(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
  out << text;
  // keep the value recognisably floating point
  if (text.find_first_of(".eE") == std::string_view::npos) out << ".0";
}

void write(std::ostringstream& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad;
        write_string(out, it.key());
        out << colon;
        write(out, it.value(), indent, depth + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& v) { return v.is_structured(); });
      if (flat) {
        out << '[';
        bool first = true;
        for (const auto& v : j) {
          if (!first) out << (indent > 0 ? ", " : ",");
          first = false;
          write(out, v, indent, depth + 1);
        }
        out << ']';
        return;
      }
      out << '[' << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad;
        write(out, v, indent, depth + 1);
      }
      out << nl << close_pad << ']';
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out << j.dump();
      return;
  }
}

}  // namespace

Json ResultDocument::to_json() const {
  Json j = Json::object();
  j["command"] = command;
  j["inputs-digest"] = inputs_digest;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["parameters"] = parameters;
  j["estimates"] = estimates;
  j["intervals"] = intervals;
  j["paths"] = paths;
  j["diagnostics"] = diagnostics;
  j["tool-version"] = std::string(tool_version());
  return j;
}

std::string dump(const Json& value, int indent) {
  std::ostringstream out;
  write(out, value, indent, 0);
  return out.str();
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

void write_atomically(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw DataError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

std::string_view tool_version() noexcept { return SIMCORR_VERSION; }

}  // namespace simcorr::cli
