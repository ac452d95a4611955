#pragma once

#include <cstdint>

namespace zkqr {

// Time source abstraction; the protocol core never reads the system
// clock directly so freshness-window edges stay testable.
class Clock {
public:
    virtual ~Clock() = default;
    virtual uint64_t now_unix_seconds() const = 0;
};

class SystemClock final : public Clock {
public:
    uint64_t now_unix_seconds() const override;
};

// Reports a caller-controlled instant.
class FixedClock final : public Clock {
public:
    explicit FixedClock(uint64_t t) : t_(t) {}
    uint64_t now_unix_seconds() const override { return t_; }
    void set(uint64_t t) { t_ = t; }
    void advance(int64_t dt) { t_ = static_cast<uint64_t>(static_cast<int64_t>(t_) + dt); }

private:
    uint64_t t_;
};

}  // namespace zkqr
