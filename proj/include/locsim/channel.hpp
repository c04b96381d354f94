#pragma once

#include <array>
#include <cstdint>

namespace locsim {

/// Identifies one transmission attempt. Outcomes are a pure function of the
/// key, so every policy run with the same seed sees the same channel.
struct ChannelKey {
    std::uint64_t seed = 0;
    std::uint32_t client = 0;    // 0-based
    std::uint64_t interval = 0;  // 1-based
    std::uint32_t attempt = 0;   // 0-based, per (client, interval)
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11; Random123 constants).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Uniform double in [0, 1) with 53 random bits.
/// Counter = (client, interval lo, interval hi, attempt), key = (seed lo, seed hi).
double channel_uniform(const ChannelKey& key);

/// Success iff channel_uniform(key) < p; p = 1 always succeeds.
bool channel_outcome(const ChannelKey& key, double p);

} // namespace locsim
