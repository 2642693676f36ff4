#include "mimoim/ofdm_phy.hpp"

#include <cmath>
#include <unsupported/Eigen/FFT>

#include "mimoim/errors.hpp"

namespace mimoim {

namespace {

Eigen::FFT<double>& unscaled_fft()
{
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

} // namespace

double energy_scale(unsigned fft_size, unsigned active_per_frame)
{
    if (active_per_frame == 0)
        throw ConfigError("energy_scale: no active subcarriers");
    return std::sqrt(static_cast<double>(fft_size) / active_per_frame);
}

TimeDomainFrame to_time(std::span<const cplx> freq_block, unsigned cyclic_prefix, double scale)
{
    const auto n = freq_block.size();
    if (n == 0)
        throw ArgumentError("to_time: empty block");
    if (cyclic_prefix >= n)
        throw ConfigError("to_time: cyclic prefix must be shorter than the FFT size");

    CVector in(freq_block.begin(), freq_block.end());
    CVector body(n);
    unscaled_fft().inv(body, in);
    const double k = scale / std::sqrt(static_cast<double>(n));
    for (auto& s : body)
        s *= k;

    TimeDomainFrame frame;
    frame.cyclic_prefix = cyclic_prefix;
    frame.scale = scale;
    frame.samples.reserve(n + cyclic_prefix);
    frame.samples.insert(frame.samples.end(), body.end() - cyclic_prefix, body.end());
    frame.samples.insert(frame.samples.end(), body.begin(), body.end());
    return frame;
}

CVector to_freq(std::span<const cplx> samples, unsigned cyclic_prefix, double scale)
{
    if (samples.size() <= cyclic_prefix)
        throw ArgumentError("to_freq: frame shorter than its cyclic prefix");
    if (!(scale > 0.0))
        throw ArgumentError("to_freq: scale must be positive");
    CVector body(samples.begin() + cyclic_prefix, samples.end());
    CVector out(body.size());
    unscaled_fft().fwd(out, body);
    const double k = 1.0 / (scale * std::sqrt(static_cast<double>(body.size())));
    for (auto& s : out)
        s *= k;
    return out;
}

CVector to_freq(const TimeDomainFrame& frame)
{
    return to_freq(frame.samples, frame.cyclic_prefix, frame.scale);
}

std::vector<CVector> apply_channel_time(std::span<const TimeDomainFrame> frames,
                                        const MimoChannelRealization& channel, double n0_time, Rng& rng)
{
    if (frames.size() != channel.tx)
        throw ArgumentError("apply_channel_time: need one frame per transmit antenna");
    const auto len = frames.front().samples.size();
    for (const auto& f : frames) {
        if (f.samples.size() != len)
            throw ArgumentError("apply_channel_time: frames differ in length");
        if (f.cyclic_prefix < channel.taps_per_link)
            throw ConfigError("apply_channel_time: cyclic prefix (" + std::to_string(f.cyclic_prefix) +
                              ") shorter than the channel (" + std::to_string(channel.taps_per_link) + " taps)");
    }

    std::vector<CVector> out(channel.rx, CVector(len, 0.0));
    for (unsigned r = 0; r < channel.rx; ++r) {
        for (unsigned t = 0; t < channel.tx; ++t) {
            const auto& g = channel.tap(r, t);
            const auto& x = frames[t].samples;
            for (std::size_t i = 0; i < len; ++i) {
                cplx acc = 0.0;
                const std::size_t lmax = std::min<std::size_t>(g.size(), i + 1);
                for (std::size_t l = 0; l < lmax; ++l)
                    acc += g[l] * x[i - l];
                out[r][i] += acc;
            }
        }
        add_noise(out[r], n0_time, rng);
    }
    return out;
}

} // namespace mimoim
