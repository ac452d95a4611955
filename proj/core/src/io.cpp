#include "zkqr/io.hpp"

#include <fstream>
#include <random>
#include <system_error>

#include "zkqr/errors.hpp"

namespace zkqr {

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StorageError("cannot open file for reading: " + path.string());
    }
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw StorageError("read failed: " + path.string());
    }
    return bytes;
}

std::string read_file_text(const std::filesystem::path& path) {
    auto bytes = read_file_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    std::random_device rd;
    const auto tmp = path.parent_path() /
                     (path.filename().string() + ".tmp" + std::to_string(rd() % 1000000));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw StorageError("cannot open file for writing: " + tmp.string());
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out.good()) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw StorageError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw StorageError("rename failed: " + path.string());
    }
}

}  // namespace zkqr
