#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace zkqr {

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it into place, so a failed
// write never leaves a partial file behind. Throws StorageError.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace zkqr
