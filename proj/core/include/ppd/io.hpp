#pragma once

#include <string>

namespace ppd {

std::string read_file(const std::string& path);  // throws LoadError if unreadable

// Writes via a temp file in the same directory, then renames into place.
void write_file_atomic(const std::string& path, const std::string& content);

void append_line(const std::string& path, const std::string& line);

bool file_exists(const std::string& path);

}  // namespace ppd
