#pragma once

#include <cstdint>
#include <random>

namespace mimoim {

using Rng = std::mt19937_64;

/// What a substream is used for within one frame.
enum class StreamPurpose : std::uint32_t { Bits = 1, Channel = 2, Noise = 3, Test = 4 };

/**
 * Independent generator for (master seed, frame index, purpose).
 *
 * The state is initialized through std::seed_seq from the six 32-bit words
 * {seed_lo, seed_hi, frame_lo, frame_hi, purpose, 0x4d494d4f}, so every frame
 * can be replayed in isolation and results do not depend on how frames are
 * spread over workers.
 */
inline Rng substream(std::uint64_t seed, std::uint64_t frame, StreamPurpose purpose)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(frame), static_cast<std::uint32_t>(frame >> 32),
                      static_cast<std::uint32_t>(purpose), std::uint32_t{0x4d494d4f}};
    return Rng(seq);
}

} // namespace mimoim
