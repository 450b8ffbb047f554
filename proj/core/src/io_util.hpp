#pragma once

// Internal file helpers. Not installed.

#include <string>

namespace clutternav::detail {

std::string read_file(const std::string& path);
/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace clutternav::detail
