#include "ppd/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ppd/errors.hpp"

namespace fs = std::filesystem;

namespace ppd {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw LoadError("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

void append_line(const std::string& path, const std::string& line) {
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw LoadError("cannot append to " + path);
  out << line << '\n';
}

bool file_exists(const std::string& path) { return fs::exists(path); }

}  // namespace ppd
