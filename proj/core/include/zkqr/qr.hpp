#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zkqr/image.hpp"

namespace zkqr {

enum class QrEcc { low, medium, quartile, high };

std::string_view to_string(QrEcc level);
QrEcc ecc_from_string(std::string_view name);

// A rendered QR symbol: square module matrix plus the version and EC
// level it was built with.
struct QrPayload {
    int version = 0;  // 1..40
    QrEcc ec_level = QrEcc::medium;
    int size = 0;     // modules per side, 4*version + 17
    std::vector<uint8_t> modules;  // row major, nonzero = dark

    bool module(int x, int y) const {
        return modules[static_cast<size_t>(y) * static_cast<size_t>(size) +
                       static_cast<size_t>(x)] != 0;
    }
};

// Byte-mode payload capacity of one version at one EC level.
int qr_byte_capacity(int version, QrEcc level);

// Byte-mode symbol at the smallest version that fits the payload.
// Throws CapacityError when even version 40 cannot hold it.
QrPayload qr_encode(std::span<const uint8_t> payload, QrEcc level = QrEcc::medium);

// Reads the payload back out of a module matrix, correcting up to the
// EC capacity of each block. Throws QrDecodeError on anything that is
// not a decodable symbol.
std::vector<uint8_t> qr_decode(const QrPayload& qr);

// Locates and samples an upright, uniformly scaled symbol in a
// grayscale image, then decodes it.
std::vector<uint8_t> qr_decode(const GrayImage& image);

// PNG-ready rendering: black modules on white, with a quiet zone.
GrayImage qr_render(const QrPayload& qr, int module_pixels = 8, int quiet_modules = 4);

// Terminal rendering, two characters per module.
std::string qr_text_art(const QrPayload& qr, int quiet_modules = 4);

}  // namespace zkqr
