#include "polbias/common/json_io.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "polbias/common/errors.hpp"

namespace polbias {
namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file_atomic(const fs::path& path, std::string_view contents) {
  static std::atomic<unsigned long> counter{0};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
         std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

Json read_json_file(const fs::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw Error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const Json& value) {
  write_text_file_atomic(path, dump_pretty(value));
}

std::vector<Json> read_jsonl_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<Json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

void write_jsonl_file(const fs::path& path, const std::vector<Json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  write_text_file_atomic(path, out);
}

std::string dump_pretty(const Json& value) { return value.dump(2) + "\n"; }

}  // namespace polbias
