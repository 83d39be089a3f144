#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace safeindex {

/// Whole-file read in binary mode. Throws DataError if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// 64-bit FNV-1a, hex encoded. Used to compare model files.
std::string fnv1a_hex(std::string_view bytes);

} // namespace safeindex
