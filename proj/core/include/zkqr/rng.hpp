#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace zkqr {

// Source of random bytes. Implementations fill the whole span or throw.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<uint8_t> out) = 0;
};

// CSPRNG backed by the operating system entropy pool.
// Throws EntropyError when the pool is unavailable.
class SystemRng final : public RandomSource {
public:
    void fill(std::span<uint8_t> out) override;
};

// Seeded, reproducible byte stream for tests and attack simulations.
// Not cryptographically secure.
class DeterministicRng final : public RandomSource {
public:
    explicit DeterministicRng(uint64_t seed) : engine_(seed) {}
    void fill(std::span<uint8_t> out) override;

private:
    std::mt19937_64 engine_;
};

}  // namespace zkqr
