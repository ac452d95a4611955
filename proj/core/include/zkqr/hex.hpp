#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zkqr {

// Lowercase hex, two characters per byte.
std::string to_hex(std::span<const uint8_t> bytes);

// Strict inverse of to_hex: even length, lowercase digits only.
// Throws EncodingError otherwise.
std::vector<uint8_t> from_hex(std::string_view hex);

bool is_lower_hex(std::string_view s);

}  // namespace zkqr
