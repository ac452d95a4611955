#include "zkqr/hash.hpp"

#include <openssl/evp.h>

#include "zkqr/errors.hpp"

namespace zkqr {

Sha256Digest sha256(std::span<const uint8_t> data) {
    Sha256Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw Error("SHA-256 computation failed");
    }
    return out;
}

}  // namespace zkqr
