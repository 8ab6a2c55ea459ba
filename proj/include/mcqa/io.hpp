#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mcqa {

/// Whole file as bytes; IoError when it cannot be opened or read.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`, so readers never
/// see a half-written file. The temporary is removed on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace mcqa
