#include "zkqr/clock.hpp"

#include <chrono>

namespace zkqr {

uint64_t SystemClock::now_unix_seconds() const {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::seconds>(now).count());
}

}  // namespace zkqr
