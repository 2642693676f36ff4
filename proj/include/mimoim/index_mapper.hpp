#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mimoim/constellation.hpp"
#include "mimoim/types.hpp"

namespace mimoim {

/// Derived sizes of the index-modulated subblock structure.
struct SubblockParams {
    unsigned fft_size = 0;        // N_F
    unsigned subblock_size = 0;   // N
    unsigned active = 0;          // K
    unsigned bits_per_symbol = 0; // log2 M
    unsigned index_bits = 0;      // p1 = floor(log2 C(N, K))
    unsigned symbol_bits = 0;     // p2 = K log2 M
    unsigned subblocks = 0;       // G = N_F / N

    unsigned bits_per_subblock() const { return index_bits + symbol_bits; }
    unsigned bits_per_frame() const { return bits_per_subblock() * subblocks; }
    unsigned active_per_frame() const { return active * subblocks; }
    /// Average energy per subcarrier, K/N.
    double symbol_power() const { return static_cast<double>(active) / subblock_size; }

    /// Validates N, K against N_F and derives the remaining fields.
    static SubblockParams make(unsigned fft_size, unsigned subblock_size, unsigned active,
                               unsigned bits_per_symbol);
};

/// Binomial coefficient C(n, k) for the small arguments used here.
unsigned long long binomial(unsigned n, unsigned k);
unsigned floor_log2(unsigned long long v);

/// One row of the look-up table. Indices are 0-based and ascending.
struct LookupRow {
    Bits bits;
    std::vector<unsigned> indices;
};

/**
 * Bijection between p1-bit patterns and legal active-index combinations.
 *
 * (N=4, K=2) uses the fixed reference table; every other pair takes the first
 * 2^p1 K-combinations of {1..N} in lexicographic order, with bit patterns
 * counting up from all zeros. For (N=4, K=3) the two rules coincide.
 */
class IndexLookupTable {
public:
    explicit IndexLookupTable(const SubblockParams& params);

    const SubblockParams& params() const { return params_; }
    std::size_t size() const { return rows_.size(); }
    const LookupRow& row(std::size_t c) const { return rows_.at(c); }
    const std::vector<LookupRow>& rows() const { return rows_; }

    /// Row selected by the leading p1 bits.
    std::size_t select(std::span<const std::uint8_t> index_bits) const;
    /// Row whose combination equals `indices` (0-based), or LookupError.
    std::size_t find(std::span<const unsigned> indices) const;

private:
    SubblockParams params_;
    std::vector<LookupRow> rows_;
};

inline IndexLookupTable build_lookup(const SubblockParams& params)
{
    return IndexLookupTable(params);
}

/// Frequency-domain block of one transmit antenna (before interleaving).
struct OfdmImFrame {
    unsigned antenna = 0;
    Bits bits;
    CVector block;
    std::vector<bool> active_mask;
};

/// Detected content of one subblock: a table row and K symbol indices.
struct SubblockSymbols {
    std::size_t combination = 0;
    std::vector<unsigned> symbols;
};

CVector encode_subblock(std::span<const std::uint8_t> bits, const IndexLookupTable& table,
                        const Constellation& constellation);

/// Bits carried by a combination given as 0-based indices.
Bits decode_index_bits(std::span<const unsigned> indices, const IndexLookupTable& table);

OfdmImFrame assemble_frame(std::span<const std::uint8_t> bits, const IndexLookupTable& table,
                           const Constellation& constellation, unsigned antenna = 0);

/// Element n of subblock g goes to position n * G + g (0-based).
CVector interleave(std::span<const cplx> x, unsigned subblocks, unsigned subblock_size);
CVector deinterleave(std::span<const cplx> x, unsigned subblocks, unsigned subblock_size);

/// Inverse of assemble_frame: one entry per subblock, in subblock order.
Bits recover_bits(std::span<const SubblockSymbols> decisions, const IndexLookupTable& table,
                  const Constellation& constellation);

/// Exact decisions for a noiseless frame, as the detector would produce them.
std::vector<SubblockSymbols> exact_decisions(const OfdmImFrame& frame, const IndexLookupTable& table,
                                             const Constellation& constellation);

/// Human-readable rendering of the table, as printed by `mimoim_cli tables`.
std::string format_lookup_table(const IndexLookupTable& table);

} // namespace mimoim
