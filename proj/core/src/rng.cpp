#include "zkqr/rng.hpp"

#include <openssl/rand.h>

#include "zkqr/errors.hpp"

namespace zkqr {

void SystemRng::fill(std::span<uint8_t> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
        throw EntropyError("system entropy source failed");
    }
}

void DeterministicRng::fill(std::span<uint8_t> out) {
    size_t i = 0;
    while (i < out.size()) {
        uint64_t word = engine_();
        for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
            out[i] = static_cast<uint8_t>(word >> (8 * b));
        }
    }
}

}  // namespace zkqr
