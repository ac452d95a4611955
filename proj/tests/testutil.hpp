#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include "zkqr/group.hpp"
#include "zkqr/rng.hpp"

namespace zkqr::test {

// Self-deleting scratch directory.
class TempDir {
public:
    TempDir() {
        auto pattern = (std::filesystem::temp_directory_path() / "zkqr_test_XXXXXX").string();
        if (::mkdtemp(pattern.data()) == nullptr) {
            throw std::runtime_error("mkdtemp failed");
        }
        path_ = pattern;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline GroupParams make_params(uint64_t p, uint64_t g, int bits) {
    return GroupParams{BigUint(p), BigUint(g), bits};
}

// The canonical desk-scale group: p = 23 = 2*11 + 1, g = 5 primitive.
inline GroupParams params23() { return make_params(23, 5, 5); }

// Fresh 256-bit parameters, generated once per test binary.
inline const GroupParams& params256() {
    static const GroupParams params = [] {
        SystemRng rng;
        return generate_params(256, rng);
    }();
    return params;
}

}  // namespace zkqr::test
