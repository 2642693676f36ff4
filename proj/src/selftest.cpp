#include <cmath>
#include <ostream>

#include "mimoim/channel.hpp"
#include "mimoim/detectors.hpp"
#include "mimoim/index_mapper.hpp"
#include "mimoim/ofdm_phy.hpp"
#include "mimoim/rng.hpp"
#include "mimoim/sim.hpp"

namespace mimoim {

namespace {

void report(std::ostream& out, bool ok, const std::string& name, const std::string& detail)
{
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
}

// Largest deviation between the time-domain chain and the frequency-domain relation.
double equivalence_deviation(std::uint64_t seed, unsigned frames)
{
    const auto p = SubblockParams::make(512, 4, 2, 1);
    const IndexLookupTable table(p);
    const Constellation bpsk(Modulation::Bpsk);
    const double scale = energy_scale(p.fft_size, p.active_per_frame());
    double worst = 0.0;
    for (unsigned f = 0; f < frames; ++f) {
        auto rng = substream(seed, f, StreamPurpose::Test);
        std::vector<CVector> blocks;
        std::vector<TimeDomainFrame> time;
        for (unsigned t = 0; t < 2; ++t) {
            Bits bits(p.bits_per_frame());
            for (auto& b : bits)
                b = static_cast<std::uint8_t>(rng() & 1u);
            blocks.push_back(interleave(assemble_frame(bits, table, bpsk).block, p.subblocks, p.subblock_size));
            time.push_back(to_time(blocks.back(), 16, scale));
        }
        const auto ch = sample_channel(2, 2, 10, p.fft_size, rng);
        const auto fast = apply_channel_freq(blocks, ch);
        const auto rx = apply_channel_time(time, ch, 0.0, rng);
        for (unsigned r = 0; r < 2; ++r) {
            const auto y = to_freq(rx[r], 16, scale);
            for (unsigned k = 0; k < p.fft_size; ++k)
                worst = std::max(worst, std::abs(y[k] - fast[r][k]));
        }
    }
    return worst;
}

// Log of the Gaussian density ratio, without the log-sum-exp rearrangement.
double density_ratio_llr(cplx x, cplx a, double var, const Constellation& c)
{
    auto pdf = [var](cplx v, cplx mean) { return std::exp(-std::norm(v - mean) / var) / (M_PI * var); };
    double num = 0.0;
    for (const auto& s : c.points())
        num += pdf(x, a * s);
    return std::log(num / pdf(x, 0.0));
}

} // namespace

bool run_selftest(std::ostream& out, std::uint64_t seed)
{
    bool all = true;

    {
        const IndexLookupTable t42(SubblockParams::make(4, 4, 2, 1));
        const IndexLookupTable t43(SubblockParams::make(4, 4, 3, 1));
        const bool ok = t42.row(0).indices == std::vector<unsigned>{0, 2} &&
                        t42.row(1).indices == std::vector<unsigned>{1, 3} &&
                        t42.row(2).indices == std::vector<unsigned>{0, 3} &&
                        t42.row(3).indices == std::vector<unsigned>{1, 2} &&
                        t43.row(0).indices == std::vector<unsigned>{0, 1, 2} &&
                        t43.row(1).indices == std::vector<unsigned>{0, 1, 3} &&
                        t43.row(2).indices == std::vector<unsigned>{0, 2, 3} &&
                        t43.row(3).indices == std::vector<unsigned>{1, 2, 3};
        report(out, ok, "lookup-tables", "N=4 K=2 and N=4 K=3 reference rows");
        all &= ok;
    }

    {
        const double dev = equivalence_deviation(seed, 20);
        const bool ok = dev < 1e-9;
        report(out, ok, "time-frequency-equivalence", "max deviation " + std::to_string(dev));
        all &= ok;
    }

    {
        auto rng = substream(seed, 0, StreamPurpose::Test);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        std::uniform_real_distribution<double> uv(0.1, 2.0);
        double worst = 0.0;
        for (auto mod : {Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam16}) {
            const Constellation c(mod);
            for (int i = 0; i < 2000; ++i) {
                const cplx x(u(rng), u(rng));
                const cplx a(u(rng), u(rng));
                const double v = uv(rng);
                worst = std::max(worst, std::abs(llr(x, a, v, c) - density_ratio_llr(x, a, v, c)));
            }
        }
        const bool ok = worst < 1e-9;
        report(out, ok, "llr-density-ratio", "max |delta| " + std::to_string(worst));
        all &= ok;
    }

    {
        bool ok = true;
        for (unsigned k : {2u, 3u}) {
            SimulationConfig cfg;
            cfg.active = k;
            cfg.max_frames = 20;
            cfg.seed = seed;
            const auto rec = run_point(cfg, 120.0);
            ok &= rec.bit_errors == 0;
        }
        report(out, ok, "noiseless-detection", "2x2 BPSK, K=2 and K=3, 20 frames at 120 dB");
        all &= ok;
    }

    {
        SimulationConfig cfg;
        cfg.max_frames = 1;
        const auto rec = run_point(cfg, 10.0);
        const double rel = std::abs(rec.cm_measured - static_cast<double>(rec.cm_formula)) / rec.cm_formula;
        const bool ok = rel <= 0.10;
        report(out, ok, "cm-count", "measured " + std::to_string(rec.cm_measured) + " vs formula " +
                                        std::to_string(rec.cm_formula));
        all &= ok;
    }

    return all;
}

} // namespace mimoim
