#include "mimoim/constellation.hpp"

#include <cmath>
#include <limits>

#include "mimoim/errors.hpp"

namespace mimoim {

Modulation parse_modulation(std::string_view name)
{
    if (name == "bpsk")
        return Modulation::Bpsk;
    if (name == "qpsk")
        return Modulation::Qpsk;
    if (name == "qam16")
        return Modulation::Qam16;
    throw ConfigError("unknown modulation '" + std::string(name) + "' (expected bpsk, qpsk or qam16)");
}

std::string_view modulation_name(Modulation mod)
{
    switch (mod) {
    case Modulation::Bpsk:
        return "bpsk";
    case Modulation::Qpsk:
        return "qpsk";
    case Modulation::Qam16:
        return "qam16";
    }
    return "?";
}

namespace {

// Gray-coded 4-PAM level for two bits: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
double pam4_level(unsigned two_bits)
{
    static constexpr double levels[4] = {-3.0, -1.0, 3.0, 1.0};
    return levels[two_bits & 3u];
}

cplx labeled_point(Modulation mod, unsigned index)
{
    switch (mod) {
    case Modulation::Bpsk:
        return index == 0 ? 1.0 : -1.0;
    case Modulation::Qpsk: {
        const double a = 1.0 / std::sqrt(2.0);
        const double re = (index & 2u) ? -a : a;
        const double im = (index & 1u) ? -a : a;
        return {re, im};
    }
    case Modulation::Qam16: {
        const double a = 1.0 / std::sqrt(10.0);
        return {a * pam4_level(index >> 2), a * pam4_level(index)};
    }
    }
    return 0.0;
}

} // namespace

Constellation::Constellation(Modulation mod)
    : mod_(mod)
{
    switch (mod) {
    case Modulation::Bpsk:
        bits_per_symbol_ = 1;
        break;
    case Modulation::Qpsk:
        bits_per_symbol_ = 2;
        break;
    case Modulation::Qam16:
        bits_per_symbol_ = 4;
        break;
    }
    const unsigned order = 1u << bits_per_symbol_;
    points_.reserve(order);
    for (unsigned m = 0; m < order; ++m)
        points_.push_back(labeled_point(mod, m));
}

unsigned Constellation::symbol_index(std::span<const std::uint8_t> bits) const
{
    if (bits.size() != bits_per_symbol_)
        throw ArgumentError("modulate: expected " + std::to_string(bits_per_symbol_) + " bits, got " +
                            std::to_string(bits.size()));
    unsigned index = 0;
    for (auto b : bits)
        index = (index << 1) | (b & 1u);
    return index;
}

cplx Constellation::modulate(std::span<const std::uint8_t> bits) const
{
    return points_[symbol_index(bits)];
}

void Constellation::label(unsigned index, std::span<std::uint8_t> out) const
{
    if (out.size() != bits_per_symbol_ || index >= order())
        throw ArgumentError("label: bad output length or symbol index");
    for (unsigned b = 0; b < bits_per_symbol_; ++b)
        out[b] = static_cast<std::uint8_t>((index >> (bits_per_symbol_ - 1 - b)) & 1u);
}

NearestPoint Constellation::nearest(cplx z, cplx scale) const
{
    NearestPoint best{0, std::numeric_limits<double>::infinity()};
    for (unsigned m = 0; m < points_.size(); ++m) {
        const double d = std::norm(z - scale * points_[m]);
        if (d < best.distance)
            best = {m, d};
    }
    return best;
}

} // namespace mimoim
