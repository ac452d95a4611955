#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace zkqr {

// 8-bit grayscale frame buffer, row major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;

    uint8_t at(int x, int y) const {
        return pixels[static_cast<size_t>(y) * static_cast<size_t>(width) +
                      static_cast<size_t>(x)];
    }
};

void write_png(const GrayImage& image, const std::filesystem::path& path);

// Accepts grayscale, palette, RGB and RGBA inputs; everything collapses
// to 8-bit gray. Throws StorageError when the file cannot be opened and
// QrDecodeError when the data is not a usable PNG.
GrayImage read_png(const std::filesystem::path& path);

}  // namespace zkqr
