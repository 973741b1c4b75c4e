#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace polbias {

// nlohmann::json keeps object keys in a std::map, so dump() output has a
// stable key order. All data files written by the harness go through here.
using Json = nlohmann::json;

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& value);

std::vector<Json> read_jsonl_file(const std::filesystem::path& path);
void write_jsonl_file(const std::filesystem::path& path, const std::vector<Json>& rows);

// Pretty form used for human-facing report JSON (two-space indent, trailing newline).
std::string dump_pretty(const Json& value);

}  // namespace polbias
