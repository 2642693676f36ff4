#include "mimoim/index_mapper.hpp"

#include <algorithm>
#include <sstream>

#include "mimoim/errors.hpp"

namespace mimoim {

unsigned long long binomial(unsigned n, unsigned k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned long long c = 1;
    for (unsigned i = 1; i <= k; ++i)
        c = c * (n - k + i) / i;
    return c;
}

unsigned floor_log2(unsigned long long v)
{
    unsigned r = 0;
    while (v >>= 1)
        ++r;
    return r;
}

SubblockParams SubblockParams::make(unsigned fft_size, unsigned subblock_size, unsigned active,
                                    unsigned bits_per_symbol)
{
    if (subblock_size == 0 || active < 1 || active > subblock_size)
        throw ConfigError("subblock parameters need 1 <= K <= N (got N=" + std::to_string(subblock_size) +
                          ", K=" + std::to_string(active) + ")");
    if (subblock_size > 30)
        throw ConfigError("subblock size N > 30 is not supported");
    if (fft_size == 0 || fft_size % subblock_size != 0)
        throw ConfigError("N=" + std::to_string(subblock_size) + " does not divide N_F=" + std::to_string(fft_size));

    SubblockParams p;
    p.fft_size = fft_size;
    p.subblock_size = subblock_size;
    p.active = active;
    p.bits_per_symbol = bits_per_symbol;
    p.index_bits = floor_log2(binomial(subblock_size, active));
    p.symbol_bits = active * bits_per_symbol;
    p.subblocks = fft_size / subblock_size;
    return p;
}

namespace {

// Advances `comb` to the next K-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<unsigned>& comb, unsigned n)
{
    const auto k = static_cast<unsigned>(comb.size());
    for (unsigned i = k; i-- > 0;) {
        if (comb[i] < n - k + i) {
            ++comb[i];
            for (unsigned j = i + 1; j < k; ++j)
                comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

Bits pattern(unsigned value, unsigned width)
{
    Bits b(width);
    for (unsigned i = 0; i < width; ++i)
        b[i] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1u);
    return b;
}

} // namespace

IndexLookupTable::IndexLookupTable(const SubblockParams& params)
    : params_(params)
{
    const unsigned n = params.subblock_size;
    const unsigned k = params.active;
    if (k < 1 || k > n)
        throw ConfigError("look-up table needs 1 <= K <= N");
    const unsigned rows = 1u << params.index_bits;

    if (n == 4 && k == 2) {
        static const std::vector<std::vector<unsigned>> reference = {{0, 2}, {1, 3}, {0, 3}, {1, 2}};
        for (unsigned c = 0; c < rows; ++c)
            rows_.push_back({pattern(c, params.index_bits), reference[c]});
        return;
    }

    std::vector<unsigned> comb(k);
    for (unsigned i = 0; i < k; ++i)
        comb[i] = i;
    for (unsigned c = 0; c < rows; ++c) {
        rows_.push_back({pattern(c, params.index_bits), comb});
        next_combination(comb, n);
    }
}

std::size_t IndexLookupTable::select(std::span<const std::uint8_t> index_bits) const
{
    if (index_bits.size() != params_.index_bits)
        throw ArgumentError("select: expected " + std::to_string(params_.index_bits) + " index bits");
    std::size_t c = 0;
    for (auto b : index_bits)
        c = (c << 1) | (b & 1u);
    return c;
}

std::size_t IndexLookupTable::find(std::span<const unsigned> indices) const
{
    for (std::size_t c = 0; c < rows_.size(); ++c)
        if (std::ranges::equal(rows_[c].indices, indices))
            return c;
    std::ostringstream os;
    os << "combination {";
    for (std::size_t i = 0; i < indices.size(); ++i)
        os << (i ? "," : "") << indices[i] + 1;
    os << "} is not in the look-up table";
    throw LookupError(os.str());
}

CVector encode_subblock(std::span<const std::uint8_t> bits, const IndexLookupTable& table,
                        const Constellation& constellation)
{
    const auto& p = table.params();
    if (bits.size() != p.bits_per_subblock())
        throw ArgumentError("encode_subblock: expected " + std::to_string(p.bits_per_subblock()) + " bits, got " +
                            std::to_string(bits.size()));
    const auto& row = table.row(table.select(bits.first(p.index_bits)));
    const unsigned bps = constellation.bits_per_symbol();

    CVector out(p.subblock_size, 0.0);
    auto symbol_bits = bits.subspan(p.index_bits);
    for (unsigned k = 0; k < p.active; ++k)
        out[row.indices[k]] = constellation.modulate(symbol_bits.subspan(k * bps, bps));
    return out;
}

Bits decode_index_bits(std::span<const unsigned> indices, const IndexLookupTable& table)
{
    return table.row(table.find(indices)).bits;
}

OfdmImFrame assemble_frame(std::span<const std::uint8_t> bits, const IndexLookupTable& table,
                           const Constellation& constellation, unsigned antenna)
{
    const auto& p = table.params();
    if (bits.size() != p.bits_per_frame())
        throw ArgumentError("assemble_frame: expected " + std::to_string(p.bits_per_frame()) + " bits, got " +
                            std::to_string(bits.size()));

    OfdmImFrame frame;
    frame.antenna = antenna;
    frame.bits.assign(bits.begin(), bits.end());
    frame.block.assign(p.fft_size, 0.0);
    frame.active_mask.assign(p.fft_size, false);

    const unsigned per = p.bits_per_subblock();
    for (unsigned g = 0; g < p.subblocks; ++g) {
        const auto sub = encode_subblock(bits.subspan(g * per, per), table, constellation);
        for (unsigned n = 0; n < p.subblock_size; ++n) {
            const unsigned pos = g * p.subblock_size + n;
            frame.block[pos] = sub[n];
            frame.active_mask[pos] = sub[n] != cplx(0.0);
        }
    }
    return frame;
}

namespace {

void check_interleaver(std::size_t size, unsigned subblocks, unsigned subblock_size)
{
    if (size != static_cast<std::size_t>(subblocks) * subblock_size)
        throw ArgumentError("interleaver: vector length " + std::to_string(size) + " != G*N = " +
                            std::to_string(subblocks * subblock_size));
}

} // namespace

CVector interleave(std::span<const cplx> x, unsigned subblocks, unsigned subblock_size)
{
    check_interleaver(x.size(), subblocks, subblock_size);
    CVector out(x.size());
    for (unsigned g = 0; g < subblocks; ++g)
        for (unsigned n = 0; n < subblock_size; ++n)
            out[n * subblocks + g] = x[g * subblock_size + n];
    return out;
}

CVector deinterleave(std::span<const cplx> x, unsigned subblocks, unsigned subblock_size)
{
    check_interleaver(x.size(), subblocks, subblock_size);
    CVector out(x.size());
    for (unsigned g = 0; g < subblocks; ++g)
        for (unsigned n = 0; n < subblock_size; ++n)
            out[g * subblock_size + n] = x[n * subblocks + g];
    return out;
}

Bits recover_bits(std::span<const SubblockSymbols> decisions, const IndexLookupTable& table,
                  const Constellation& constellation)
{
    const auto& p = table.params();
    if (decisions.size() != p.subblocks)
        throw ArgumentError("recover_bits: expected " + std::to_string(p.subblocks) + " subblock decisions");
    const unsigned bps = constellation.bits_per_symbol();

    Bits out;
    out.reserve(p.bits_per_frame());
    Bits symbol(bps);
    for (const auto& d : decisions) {
        if (d.symbols.size() != p.active)
            throw ArgumentError("recover_bits: decision must carry K symbols");
        const auto& row = table.row(d.combination);
        out.insert(out.end(), row.bits.begin(), row.bits.end());
        for (auto s : d.symbols) {
            constellation.label(s, symbol);
            out.insert(out.end(), symbol.begin(), symbol.end());
        }
    }
    return out;
}

std::vector<SubblockSymbols> exact_decisions(const OfdmImFrame& frame, const IndexLookupTable& table,
                                             const Constellation& constellation)
{
    const auto& p = table.params();
    std::vector<SubblockSymbols> out(p.subblocks);
    std::vector<unsigned> support;
    for (unsigned g = 0; g < p.subblocks; ++g) {
        support.clear();
        for (unsigned n = 0; n < p.subblock_size; ++n)
            if (frame.active_mask[g * p.subblock_size + n])
                support.push_back(n);
        out[g].combination = table.find(support);
        for (auto n : support)
            out[g].symbols.push_back(constellation.nearest(frame.block[g * p.subblock_size + n]).index);
    }
    return out;
}

std::string format_lookup_table(const IndexLookupTable& table)
{
    const auto& p = table.params();
    std::ostringstream os;
    os << "Reference Look-up Table for N=" << p.subblock_size << ",K=" << p.active << " and p1=" << p.index_bits
       << "\n";
    os << "Bits | Indices | Subblock\n";
    for (const auto& row : table.rows()) {
        os << "[";
        for (std::size_t i = 0; i < row.bits.size(); ++i)
            os << (i ? " " : "") << int(row.bits[i]);
        os << "] | {";
        for (std::size_t i = 0; i < row.indices.size(); ++i)
            os << (i ? "," : "") << row.indices[i] + 1;
        os << "} | [";
        unsigned next = 0;
        for (unsigned n = 0; n < p.subblock_size; ++n) {
            os << (n ? " " : "");
            if (next < row.indices.size() && row.indices[next] == n)
                os << "s" << ++next;
            else
                os << "0";
        }
        os << "]\n";
    }
    return os.str();
}

} // namespace mimoim
