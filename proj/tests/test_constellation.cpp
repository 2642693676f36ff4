#include <doctest.h>

#include <cmath>
#include <set>

#include "mimoim/constellation.hpp"
#include "mimoim/errors.hpp"

using namespace mimoim;

namespace {

const Modulation kAll[] = {Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam16};

Bits bits_of(unsigned v, unsigned width)
{
    Bits b(width);
    for (unsigned i = 0; i < width; ++i)
        b[i] = (v >> (width - 1 - i)) & 1u;
    return b;
}

} // namespace

TEST_CASE("bpsk and qpsk labels")
{
    const Constellation bpsk(Modulation::Bpsk);
    CHECK(bpsk.modulate(Bits{0}) == cplx(1.0));
    CHECK(bpsk.modulate(Bits{1}) == cplx(-1.0));

    const Constellation qpsk(Modulation::Qpsk);
    const double a = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(qpsk.modulate(Bits{0, 0}) - cplx(a, a)) < 1e-15);
}

TEST_CASE("16-QAM grid scale")
{
    // Mean |s|^2 over the unscaled {+-1,+-3}^2 grid.
    double e = 0.0;
    for (int i : {-3, -1, 1, 3})
        for (int q : {-3, -1, 1, 3})
            e += i * i + q * q;
    e /= 16.0;
    CHECK(e == 10.0);

    const Constellation qam(Modulation::Qam16);
    std::set<double> levels;
    for (const auto& s : qam.points())
        levels.insert(std::round(std::abs(s.real()) * std::sqrt(e) * 1e9) / 1e9);
    CHECK(levels == std::set<double>{1.0, 3.0});
}

TEST_CASE("unit average energy and distinct points")
{
    for (auto mod : kAll) {
        const Constellation c(mod);
        double e = 0.0;
        for (const auto& s : c.points())
            e += std::norm(s);
        CHECK(std::abs(e / c.order() - 1.0) < 1e-12);
        for (unsigned i = 0; i < c.order(); ++i)
            for (unsigned j = i + 1; j < c.order(); ++j)
                CHECK(std::abs(c.point(i) - c.point(j)) > 1e-6);
    }
}

TEST_CASE("gray labeling: nearest neighbours differ in one bit")
{
    for (auto mod : {Modulation::Qpsk, Modulation::Qam16}) {
        const Constellation c(mod);
        double dmin = 1e9;
        for (unsigned i = 0; i < c.order(); ++i)
            for (unsigned j = i + 1; j < c.order(); ++j)
                dmin = std::min(dmin, std::abs(c.point(i) - c.point(j)));
        for (unsigned i = 0; i < c.order(); ++i)
            for (unsigned j = i + 1; j < c.order(); ++j)
                if (std::abs(std::abs(c.point(i) - c.point(j)) - dmin) < 1e-9)
                    CHECK(__builtin_popcount(i ^ j) == 1);
    }
}

TEST_CASE("nearest")
{
    const Constellation bpsk(Modulation::Bpsk);
    auto p = bpsk.nearest(1.0);
    CHECK(bpsk.point(p.index) == cplx(1.0));
    CHECK(p.distance == 0.0);

    p = bpsk.nearest(0.0);
    CHECK(bpsk.point(p.index) == cplx(1.0));
    CHECK(p.distance == doctest::Approx(1.0));

    const Constellation qpsk(Modulation::Qpsk);
    // Distances to (+-1 +-j)/sqrt2: (1-j)/sqrt2 is closest to 0.9-0.1j.
    p = qpsk.nearest(cplx(0.9, -0.1));
    const double a = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(qpsk.point(p.index) - cplx(a, -a)) < 1e-15);
    CHECK(p.distance == doctest::Approx(std::norm(cplx(0.9 - a, -0.1 + a))));

    // Scaled metric.
    p = bpsk.nearest(cplx(0.0, -2.0), cplx(0.0, 2.0));
    CHECK(p.index == 1);
}

TEST_CASE("modulate then nearest recovers every label")
{
    for (auto mod : kAll) {
        const Constellation c(mod);
        for (unsigned v = 0; v < c.order(); ++v) {
            const auto b = bits_of(v, c.bits_per_symbol());
            const auto p = c.nearest(c.modulate(b));
            CHECK(p.index == v);
            CHECK(p.distance == 0.0);
            Bits back(c.bits_per_symbol());
            c.label(p.index, back);
            CHECK(back == b);
        }
    }
}

TEST_CASE("wrong bit count is an argument error")
{
    const Constellation qpsk(Modulation::Qpsk);
    CHECK_THROWS_AS(qpsk.modulate(Bits{1}), ArgumentError);
    CHECK_THROWS_AS(qpsk.modulate(Bits{1, 0, 1}), ArgumentError);
    CHECK_THROWS_AS(parse_modulation("8psk"), ConfigError);
    CHECK(parse_modulation("qam16") == Modulation::Qam16);
}
