#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace tabdoc::io {

std::string read_text(const std::filesystem::path& path);
/// Writes atomically (temp file + rename) and creates parent directories.
void write_text(const std::filesystem::path& path, std::string_view content);

nlohmann::json read_json(const std::filesystem::path& path);
/// Two-space indented, trailing newline; key order is nlohmann's sorted map,
/// so equal values serialize byte-identically.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

/// Lowercase hex SHA-256 of the content.
std::string sha256_hex(std::string_view content);

}  // namespace tabdoc::io
