#include "devstone/burn.hpp"

#include <array>
#include <chrono>
#include <stdexcept>

namespace devstone {

namespace {

using Clock = std::chrono::steady_clock;

static_assert(Clock::is_steady, "monotonic clock required for burn timing");

double elapsed_ms(Clock::time_point from, Clock::time_point to) {
    return std::chrono::duration<double, std::milli>(to - from).count();
}

}  // namespace

std::uint64_t burn_kernel(std::uint64_t iterations) {
    // Integer mix over a small working set: add, multiply, xor, rotate,
    // compare. Stands in for the Dhrystone record/string shuffling.
    std::array<std::uint32_t, 16> buf{};
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<std::uint32_t>(i * 2654435761u);
    std::uint32_t a = 0x9e3779b9u;
    std::uint32_t b = 0x85ebca6bu;
    for (std::uint64_t i = 0; i < iterations; ++i) {
        a = a * 1664525u + 1013904223u;
        b ^= a;
        b = (b << 7) | (b >> 25);
        buf[a & 15u] += b;
        a += buf[b & 15u];
        if (a > b) b += 3u; else a ^= b;
    }
    std::uint64_t sum = (static_cast<std::uint64_t>(a) << 32) | b;
    for (std::uint32_t v : buf) sum += v;
    return sum;
}

double calibrate_burn() {
    static const double iters_per_ms = [] {
        volatile std::uint64_t sink = 0;
        // Grow the sample until the measurement spans at least ~20 ms so
        // clock granularity and startup jitter stay negligible.
        std::uint64_t iterations = 1u << 16;
        for (;;) {
            const Clock::time_point t0 = Clock::now();
            sink = sink + burn_kernel(iterations);
            const double ms = elapsed_ms(t0, Clock::now());
            if (ms >= 20.0) {
                const double rate = static_cast<double>(iterations) / ms;
                if (!(rate > 0.0)) throw std::runtime_error("burn calibration failed");
                return rate;
            }
            iterations *= 2;
        }
    }();
    return iters_per_ms;
}

void burn_ms(double milliseconds) {
    if (milliseconds <= 0.0) return;
    const double rate = calibrate_burn();
    // Chunks of a quarter millisecond keep overshoot well inside the +-20%
    // tolerance while the clock check prevents undershoot.
    const auto chunk = static_cast<std::uint64_t>(rate / 4.0) + 1;
    volatile std::uint64_t sink = 0;
    const Clock::time_point t0 = Clock::now();
    while (elapsed_ms(t0, Clock::now()) < milliseconds) {
        sink = sink + burn_kernel(chunk);
    }
}

}  // namespace devstone
