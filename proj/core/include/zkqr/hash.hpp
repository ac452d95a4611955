#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace zkqr {

using Sha256Digest = std::array<uint8_t, 32>;

Sha256Digest sha256(std::span<const uint8_t> data);

}  // namespace zkqr
