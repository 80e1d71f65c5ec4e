#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace hyprank::io {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);

// Calls `row` for every non-blank line, with its 1-based line number.
void read_jsonl(const std::filesystem::path& path,
                const std::function<void(const json& row, std::size_t line)>& row);

// Writes `content` to a sibling temp file and renames it over `path`, so
// readers never observe a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Compact single-line dump used for every JSON-lines row.
std::string dump_line(const json& row);

}  // namespace hyprank::io
