#include "hyprank/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "hyprank/error.hpp"
#include "hyprank/rng.hpp"

namespace hyprank {

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> out;
  if (k > n) k = n;
  out.reserve(k);
  std::unordered_set<std::size_t> taken;
  for (std::size_t j = n - k; j < n; ++j) {
    std::size_t t = uniform_index(rng, j + 1);
    if (taken.insert(t).second) {
      out.push_back(t);
    } else {
      taken.insert(j);
      out.push_back(j);
    }
  }
  return out;
}

namespace io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": invalid JSON: " + e.what());
  }
}

void read_jsonl(const std::filesystem::path& path,
                const std::function<void(const json&, std::size_t)>& row) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json value;
    try {
      value = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    row(value, line_no);
  }
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string dump_line(const json& row) {
  return row.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace io
}  // namespace hyprank
