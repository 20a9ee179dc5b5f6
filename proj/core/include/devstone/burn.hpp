#ifndef DEVSTONE_BURN_HPP
#define DEVSTONE_BURN_HPP

#include <cstdint>

namespace devstone {

/// Runs the Dhrystone-style integer kernel for `iterations` rounds and
/// returns a checksum (so the loop cannot be optimized away).
std::uint64_t burn_kernel(std::uint64_t iterations);

/// Times the integer kernel against the monotonic clock and returns
/// iterations per millisecond. Computed once per process, then cached.
double calibrate_burn();

/// Busy-loops for roughly `milliseconds` of wall-clock time using the
/// calibrated kernel, chunked against the monotonic clock. A non-positive
/// request returns immediately without touching the clock.
void burn_ms(double milliseconds);

}  // namespace devstone

#endif
