#pragma once

#include <span>
#include <string>
#include <string_view>

#include "mimoim/types.hpp"

namespace mimoim {

enum class Modulation { Bpsk, Qpsk, Qam16 };

Modulation parse_modulation(std::string_view name);
std::string_view modulation_name(Modulation mod);

/// Result of a nearest-point search: symbol index and its squared distance.
struct NearestPoint {
    unsigned index = 0;
    double distance = 0.0;
};

/**
 * Unit-average-energy M-ary constellation with a fixed bit labeling.
 *
 * Symbol index m carries the bit pattern given by the binary expansion of m,
 * most significant bit first. BPSK maps 0 to +1; QPSK and 16-QAM are Gray
 * labeled per axis, the leading half of the bits driving the in-phase part.
 */
class Constellation {
public:
    explicit Constellation(Modulation mod);

    Modulation modulation() const { return mod_; }
    unsigned order() const { return static_cast<unsigned>(points_.size()); }
    unsigned bits_per_symbol() const { return bits_per_symbol_; }
    const CVector& points() const { return points_; }
    const cplx& point(unsigned index) const { return points_.at(index); }

    cplx modulate(std::span<const std::uint8_t> bits) const;
    unsigned symbol_index(std::span<const std::uint8_t> bits) const;
    /// Writes the label of `index` into `out` (length bits_per_symbol).
    void label(unsigned index, std::span<std::uint8_t> out) const;

    /// argmin_m |z - scale * s_m|^2, ties to the lowest index.
    NearestPoint nearest(cplx z, cplx scale = 1.0) const;

private:
    Modulation mod_;
    unsigned bits_per_symbol_;
    CVector points_;
};

} // namespace mimoim
