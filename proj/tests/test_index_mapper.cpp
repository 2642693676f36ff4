#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "mimoim/errors.hpp"
#include "mimoim/index_mapper.hpp"

using namespace mimoim;

namespace {

using Idx = std::vector<unsigned>;

SubblockParams params(unsigned nf, unsigned n, unsigned k, unsigned bps = 1)
{
    return SubblockParams::make(nf, n, k, bps);
}

Bits random_bits(std::size_t n, std::mt19937_64& rng)
{
    Bits b(n);
    for (auto& x : b)
        x = rng() & 1u;
    return b;
}

bool close(const CVector& a, const CVector& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12)
            return false;
    return true;
}

} // namespace

TEST_CASE("subblock parameters")
{
    const auto p = params(512, 4, 2);
    CHECK(p.index_bits == 2);
    CHECK(p.symbol_bits == 2);
    CHECK(p.subblocks == 128);
    CHECK(p.bits_per_frame() == 512);
    CHECK(params(512, 4, 3, 2).bits_per_subblock() == 8);
    CHECK(params(16, 8, 4).index_bits == 6); // C(8,4) = 70
    CHECK(binomial(8, 4) == 70);

    CHECK_THROWS_AS(params(512, 4, 5), ConfigError);
    CHECK_THROWS_AS(params(512, 4, 0), ConfigError);
    CHECK_THROWS_AS(params(510, 4, 2), ConfigError);
}

TEST_CASE("reference tables")
{
    const IndexLookupTable t42(params(4, 4, 2));
    REQUIRE(t42.size() == 4);
    CHECK(t42.row(0).indices == Idx{0, 2});
    CHECK(t42.row(1).indices == Idx{1, 3});
    CHECK(t42.row(2).indices == Idx{0, 3});
    CHECK(t42.row(3).indices == Idx{1, 2});
    CHECK(t42.row(t42.select(Bits{1, 0})).indices == Idx{0, 3});

    const IndexLookupTable t43(params(4, 4, 3));
    REQUIRE(t43.size() == 4);
    CHECK(t43.row(0).indices == Idx{0, 1, 2});
    CHECK(t43.row(1).indices == Idx{0, 1, 3});
    CHECK(t43.row(2).indices == Idx{0, 2, 3});
    CHECK(t43.row(3).indices == Idx{1, 2, 3});
    CHECK(t43.row(t43.select(Bits{1, 1})).indices == Idx{1, 2, 3});

    const IndexLookupTable t21(params(2, 2, 1));
    REQUIRE(t21.size() == 2);
    CHECK(t21.row(0).bits == Bits{0});
    CHECK(t21.row(0).indices == Idx{0});
    CHECK(t21.row(1).bits == Bits{1});
    CHECK(t21.row(1).indices == Idx{1});
}

TEST_CASE("general tables are lexicographic and well formed")
{
    for (unsigned n = 1; n <= 8; ++n) {
        for (unsigned k = 1; k <= n; ++k) {
            const IndexLookupTable t(params(n, n, k));
            const auto p = t.params();
            CHECK(t.size() == (1u << p.index_bits));
            CHECK(t.size() <= binomial(n, k));
            std::set<Idx> combos;
            for (std::size_t c = 0; c < t.size(); ++c) {
                const auto& row = t.row(c);
                CHECK(row.indices.size() == k);
                CHECK(std::is_sorted(row.indices.begin(), row.indices.end()));
                CHECK(std::adjacent_find(row.indices.begin(), row.indices.end()) == row.indices.end());
                CHECK(t.select(row.bits) == c);
                combos.insert(row.indices);
            }
            CHECK(combos.size() == t.size());
            if (!(n == 4 && k == 2))
                CHECK(std::is_sorted(t.rows().begin(), t.rows().end(),
                                     [](const auto& a, const auto& b) { return a.indices < b.indices; }));
        }
    }
}

TEST_CASE("encode_subblock")
{
    const Constellation bpsk(Modulation::Bpsk);
    const Constellation qpsk(Modulation::Qpsk);
    const IndexLookupTable t42(params(4, 4, 2));
    const IndexLookupTable t43(params(4, 4, 3));
    const IndexLookupTable t42q(params(4, 4, 2, 2));
    const double a = 1.0 / std::sqrt(2.0);

    CHECK(close(encode_subblock(Bits{0, 0, 0, 0}, t42, bpsk), {1, 0, 1, 0}));
    CHECK(close(encode_subblock(Bits{0, 1, 1, 1, 0}, t43, bpsk), {-1, -1, 0, 1}));
    CHECK(close(encode_subblock(Bits{1, 1, 0, 0, 0, 0}, t42q, qpsk), {0, cplx(a, a), cplx(a, a), 0}));
    CHECK_THROWS_AS(encode_subblock(Bits{0, 0, 0}, t42, bpsk), ArgumentError);
}

TEST_CASE("golden subblocks for the reference tables")
{
    // Each line: "N K hexbits : re,im;re,im;..." with bits MSB first.
    std::ifstream in(MIMOIM_TEST_DATA "/golden_subblocks.txt");
    REQUIRE(in);
    const Constellation bpsk(Modulation::Bpsk);
    std::string line;
    int cases = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        unsigned n = 0, k = 0;
        std::string hex, colon, entries;
        ls >> n >> k >> hex >> colon >> entries;
        const IndexLookupTable t(params(n, n, k));
        const unsigned width = t.params().bits_per_subblock();
        const unsigned value = std::stoul(hex, nullptr, 16);
        Bits bits(width);
        for (unsigned i = 0; i < width; ++i)
            bits[i] = (value >> (width - 1 - i)) & 1u;

        CVector expected;
        std::istringstream es(entries);
        std::string e;
        while (std::getline(es, e, ';')) {
            const auto comma = e.find(',');
            expected.emplace_back(std::stod(e.substr(0, comma)), std::stod(e.substr(comma + 1)));
        }
        INFO(line);
        CHECK(close(encode_subblock(bits, t, bpsk), expected));
        ++cases;
    }
    CHECK(cases == 16 + 32);
}

TEST_CASE("decode_index_bits")
{
    const IndexLookupTable t42(params(4, 4, 2));
    const IndexLookupTable t43(params(4, 4, 3));
    CHECK(decode_index_bits(Idx{1, 2}, t42) == Bits{1, 1});
    CHECK(decode_index_bits(Idx{0, 2}, t42) == Bits{0, 0});
    CHECK(decode_index_bits(Idx{0, 1, 2}, t43) == Bits{0, 0});
    // {1,2} is a valid 2-combination but not one of the four rows.
    CHECK_THROWS_AS(decode_index_bits(Idx{0, 1}, t42), LookupError);
}

TEST_CASE("assemble_frame")
{
    const Constellation bpsk(Modulation::Bpsk);
    const IndexLookupTable t(params(8, 4, 2));

    auto f = assemble_frame(Bits(8, 0), t, bpsk);
    CHECK(close(f.block, {1, 0, 1, 0, 1, 0, 1, 0}));

    f = assemble_frame(Bits{0, 1, 0, 0, 1, 1, 1, 1}, t, bpsk);
    CHECK(close(f.block, {0, 1, 0, 1, 0, -1, -1, 0}));
    CHECK(std::count(f.active_mask.begin(), f.active_mask.end(), true) == 4);

    CHECK_THROWS_AS(assemble_frame(Bits(7, 0), t, bpsk), ArgumentError);
}

TEST_CASE("interleaver")
{
    CVector x(12);
    for (unsigned i = 0; i < 12; ++i)
        x[i] = cplx(i, -static_cast<double>(i));
    const auto y = interleave(x, 3, 4);
    // Element n=3 of subblock g=2 (1-based) sits at 1-based position (3-1)*3+2 = 8.
    CHECK(y[7] == x[(2 - 1) * 4 + (3 - 1)]);
    CHECK(interleave(x, 1, 12) == x);
    CHECK(deinterleave(y, 3, 4) == x);
    CHECK_THROWS_AS(interleave(x, 5, 4), ArgumentError);

    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
        CVector v(512);
        for (auto& e : v)
            e = {nd(rng), nd(rng)};
        const auto w = interleave(v, 128, 4);
        CHECK(deinterleave(w, 128, 4) == v);
        double ev = 0, ew = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            ev += std::norm(v[i]);
            ew += std::norm(w[i]);
        }
        CHECK(ev == doctest::Approx(ew).epsilon(1e-14));
        auto key = [](cplx c) { return std::pair(c.real(), c.imag()); };
        std::vector<std::pair<double, double>> sv, sw;
        for (std::size_t i = 0; i < v.size(); ++i) {
            sv.push_back(key(v[i]));
            sw.push_back(key(w[i]));
        }
        std::sort(sv.begin(), sv.end());
        std::sort(sw.begin(), sw.end());
        CHECK(sv == sw);
    }
}

TEST_CASE("recover_bits by hand")
{
    const Constellation bpsk(Modulation::Bpsk);
    const IndexLookupTable t42(params(4, 4, 2));
    const IndexLookupTable t43(params(4, 4, 3));
    std::vector<SubblockSymbols> d = {{t42.find(Idx{0, 3}), {0, 1}}};
    CHECK(recover_bits(d, t42, bpsk) == Bits{1, 0, 0, 1});
    d = {{t43.find(Idx{1, 2, 3}), {0, 0, 0}}};
    CHECK(recover_bits(d, t43, bpsk) == Bits{1, 1, 0, 0, 0});
}

TEST_CASE("frames round-trip through exact decisions")
{
    std::mt19937_64 rng(99);
    for (auto mod : {Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam16}) {
        const Constellation c(mod);
        for (auto [n, k] : {std::pair{4u, 2u}, {4u, 3u}, {8u, 3u}, {2u, 1u}, {1u, 1u}}) {
            const IndexLookupTable t(params(64, n, k, c.bits_per_symbol()));
            const auto& p = t.params();
            for (int trial = 0; trial < (mod == Modulation::Bpsk && n == 4 && k == 2 ? 1000 : 100); ++trial) {
                const auto bits = random_bits(p.bits_per_frame(), rng);
                const auto f = assemble_frame(bits, t, c);
                for (unsigned g = 0; g < p.subblocks; ++g) {
                    int active = 0;
                    for (unsigned i = 0; i < n; ++i)
                        active += f.active_mask[g * n + i];
                    CHECK(active == static_cast<int>(k));
                }
                const auto d = exact_decisions(f, t, c); // throws if a support is not a table row
                CHECK(recover_bits(d, t, c) == bits);
            }
        }
    }
}

TEST_CASE("table rendering")
{
    const IndexLookupTable t42(params(4, 4, 2));
    CHECK(format_lookup_table(t42) == "Reference Look-up Table for N=4,K=2 and p1=2\n"
                                      "Bits | Indices | Subblock\n"
                                      "[0 0] | {1,3} | [s1 0 s2 0]\n"
                                      "[0 1] | {2,4} | [0 s1 0 s2]\n"
                                      "[1 0] | {1,4} | [s1 0 0 s2]\n"
                                      "[1 1] | {2,3} | [0 s1 s2 0]\n");
}
