#include "mimoim/channel.hpp"

#include <cmath>
#include <unsupported/Eigen/FFT>

#include "mimoim/errors.hpp"

namespace mimoim {

cplx complex_gaussian(double variance, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

CVector frequency_response(std::span<const cplx> taps, unsigned fft_size)
{
    if (taps.size() > fft_size)
        throw ArgumentError("frequency_response: more taps than FFT points");
    CVector padded(fft_size, 0.0);
    std::copy(taps.begin(), taps.end(), padded.begin());
    CVector out(fft_size);
    thread_local Eigen::FFT<double> fft;
    fft.fwd(out, padded);
    return out;
}

MimoChannelRealization channel_from_taps(unsigned tx, unsigned rx, std::vector<CVector> taps, unsigned fft_size)
{
    if (taps.size() != static_cast<std::size_t>(tx) * rx)
        throw ArgumentError("channel_from_taps: expected R*T tap vectors");
    MimoChannelRealization ch;
    ch.tx = tx;
    ch.rx = rx;
    ch.taps_per_link = taps.empty() ? 0 : static_cast<unsigned>(taps.front().size());
    ch.fft_size = fft_size;
    ch.freq.reserve(taps.size());
    for (const auto& g : taps) {
        if (g.size() != ch.taps_per_link)
            throw ArgumentError("channel_from_taps: all links need the same tap count");
        ch.freq.push_back(frequency_response(g, fft_size));
    }
    ch.taps = std::move(taps);
    return ch;
}

MimoChannelRealization sample_channel(unsigned tx, unsigned rx, unsigned taps, unsigned fft_size, Rng& rng)
{
    if (taps < 1)
        throw ConfigError("channel needs at least one tap");
    std::vector<CVector> g(static_cast<std::size_t>(tx) * rx, CVector(taps));
    const double tap_variance = 1.0 / taps;
    for (auto& link : g)
        for (auto& c : link)
            c = complex_gaussian(tap_variance, rng);
    return channel_from_taps(tx, rx, std::move(g), fft_size);
}

std::vector<CVector> apply_channel_freq(std::span<const CVector> blocks, const MimoChannelRealization& channel)
{
    if (blocks.size() != channel.tx)
        throw ArgumentError("apply_channel_freq: need one block per transmit antenna");
    std::vector<CVector> out(channel.rx, CVector(channel.fft_size, 0.0));
    for (unsigned t = 0; t < channel.tx; ++t) {
        if (blocks[t].size() != channel.fft_size)
            throw ArgumentError("apply_channel_freq: block length differs from N_F");
        for (unsigned r = 0; r < channel.rx; ++r) {
            const auto& h = channel.response(r, t);
            for (unsigned k = 0; k < channel.fft_size; ++k)
                out[r][k] += blocks[t][k] * h[k];
        }
    }
    return out;
}

NoiseSpec noise_spec(double snr_db, unsigned fft_size, unsigned cyclic_prefix, unsigned m, unsigned active,
                     unsigned subblocks)
{
    if (m == 0)
        throw ConfigError("noise_spec: frame carries no bits");
    NoiseSpec s;
    s.snr_db = snr_db;
    s.energy_per_bit = static_cast<double>(fft_size + cyclic_prefix) / m;
    s.n0_time = s.energy_per_bit * std::pow(10.0, -snr_db / 10.0);
    s.n0_freq = s.n0_time * static_cast<double>(active) * subblocks / fft_size;
    return s;
}

void add_noise(std::span<cplx> v, double variance, Rng& rng)
{
    if (!(variance >= 0.0))
        throw ArgumentError("add_noise: variance must be non-negative");
    if (variance == 0.0)
        return;
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    for (auto& x : v) {
        const double re = normal(rng);
        const double im = normal(rng);
        x += cplx(re, im);
    }
}

CVector with_noise(CVector v, double variance, Rng& rng)
{
    add_noise(std::span<cplx>(v), variance, rng);
    return v;
}

} // namespace mimoim
