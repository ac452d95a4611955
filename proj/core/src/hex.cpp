#include "zkqr/hex.hpp"

#include "zkqr/errors.hpp"

namespace zkqr {

namespace {

constexpr char kDigits[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

}  // namespace

std::string to_hex(std::span<const uint8_t> bytes) {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

std::vector<uint8_t> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw EncodingError("hex string has odd length");
    }
    std::vector<uint8_t> out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw EncodingError("hex string contains non-lowercase-hex character");
        }
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

bool is_lower_hex(std::string_view s) {
    for (char c : s) {
        if (nibble(c) < 0) return false;
    }
    return true;
}

}  // namespace zkqr
