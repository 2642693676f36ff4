#pragma once

#include <span>
#include <vector>

#include "mimoim/channel.hpp"
#include "mimoim/types.hpp"

namespace mimoim {

/// Cyclic prefix followed by the N_F-sample OFDM body.
struct TimeDomainFrame {
    CVector samples;
    unsigned cyclic_prefix = 0;
    double scale = 1.0;

    std::size_t body_size() const { return samples.size() - cyclic_prefix; }
};

/// sqrt(N_F / (K G)): brings the expected body energy to N_F for K G unit-energy tones.
double energy_scale(unsigned fft_size, unsigned active_per_frame);

/// Unitary IFFT, multiplied by `scale`, with the last C_p samples prepended.
TimeDomainFrame to_time(std::span<const cplx> freq_block, unsigned cyclic_prefix, double scale);

/// Strips the prefix, applies the unitary FFT and divides by the frame scale.
CVector to_freq(const TimeDomainFrame& frame);
/// Same, for received samples that share the frame layout of `reference`.
CVector to_freq(std::span<const cplx> samples, unsigned cyclic_prefix, double scale);

/**
 * Linear convolution of each transmit frame with g_{r,t}, summed over t and
 * truncated to the frame length, plus CN(0, n0_time) noise per sample.
 * Requires C_p >= L.
 */
std::vector<CVector> apply_channel_time(std::span<const TimeDomainFrame> frames,
                                        const MimoChannelRealization& channel, double n0_time, Rng& rng);

} // namespace mimoim
