#pragma once

#include <array>
#include <cstdint>

// Counter-addressed random streams: (seed, stream) fully determines the
// sample sequence, so trials can be farmed out to any number of workers and
// still reproduce bit-exactly. Stream state is xoshiro256++ seeded through a
// splitmix64 expansion of an avalanche-mixed (seed, stream) key.

namespace osd {

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // uniform in [0, 1)
    double next_uniform();

    // uniform in {0, 1, ..., bound-1}, bias-free
    std::uint64_t next_below(std::uint64_t bound);

    // standard normal via Box-Muller; second member of each pair is cached
    double next_gaussian();

private:
    std::array<std::uint64_t, 4> s_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace osd
