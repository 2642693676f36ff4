#pragma once

#include <span>
#include <vector>

#include "mimoim/rng.hpp"
#include "mimoim/types.hpp"

namespace mimoim {

/// L-tap impulse responses and N_F-point frequency responses for all (r, t).
struct MimoChannelRealization {
    unsigned tx = 0;
    unsigned rx = 0;
    unsigned taps_per_link = 0;
    unsigned fft_size = 0;
    std::vector<CVector> taps; // [r * tx + t], length L
    std::vector<CVector> freq; // [r * tx + t], length N_F

    const CVector& tap(unsigned r, unsigned t) const { return taps[r * tx + t]; }
    const CVector& response(unsigned r, unsigned t) const { return freq[r * tx + t]; }
};

/// Noise-free frequency-domain relation: y_r = sum_t diag(x_t) h_{r,t}.
std::vector<CVector> apply_channel_freq(std::span<const CVector> blocks, const MimoChannelRealization& channel);

/// Non-normalized N_F-point DFT of the zero-padded tap vector.
CVector frequency_response(std::span<const cplx> taps, unsigned fft_size);

/// Taps i.i.d. CN(0, 1/L) (uniform power-delay profile).
MimoChannelRealization sample_channel(unsigned tx, unsigned rx, unsigned taps, unsigned fft_size, Rng& rng);

/// Builds a realization from given taps, computing the frequency responses.
MimoChannelRealization channel_from_taps(unsigned tx, unsigned rx, std::vector<CVector> taps, unsigned fft_size);

struct NoiseSpec {
    double snr_db = 0.0;
    double energy_per_bit = 0.0; // E_b = (N_F + C_p) / m
    double n0_time = 0.0;        // N_{0,T}
    double n0_freq = 0.0;        // N_{0,F}
};

/// SNR = E_b / N_{0,T}; N_{0,T} = (N_F / (K G)) N_{0,F}. `m` is bits per antenna per frame.
NoiseSpec noise_spec(double snr_db, unsigned fft_size, unsigned cyclic_prefix, unsigned m, unsigned active,
                     unsigned subblocks);

/// Adds i.i.d. CN(0, variance) samples in place.
void add_noise(std::span<cplx> v, double variance, Rng& rng);
CVector with_noise(CVector v, double variance, Rng& rng);

cplx complex_gaussian(double variance, Rng& rng);

} // namespace mimoim
