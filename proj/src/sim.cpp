#include "mimoim/sim.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "mimoim/channel.hpp"
#include "mimoim/errors.hpp"
#include "mimoim/ofdm_phy.hpp"
#include "mimoim/rng.hpp"

namespace mimoim {

Scheme parse_scheme(std::string_view name)
{
    if (name == "ofdm-im")
        return Scheme::OfdmIm;
    if (name == "classical")
        return Scheme::Classical;
    throw ConfigError("unknown scheme '" + std::string(name) + "' (expected ofdm-im or classical)");
}

std::string_view scheme_name(Scheme scheme)
{
    return scheme == Scheme::OfdmIm ? "ofdm-im" : "classical";
}

DetectorKind parse_detector(std::string_view name)
{
    if (name == "mmse-llr")
        return DetectorKind::MmseLlr;
    if (name == "joint-ml")
        return DetectorKind::JointMl;
    if (name == "classical-mmse")
        return DetectorKind::ClassicalMmse;
    throw ConfigError("unknown detector '" + std::string(name) + "' (expected mmse-llr, joint-ml or classical-mmse)");
}

std::string_view detector_name(DetectorKind detector)
{
    switch (detector) {
    case DetectorKind::MmseLlr:
        return "mmse-llr";
    case DetectorKind::JointMl:
        return "joint-ml";
    case DetectorKind::ClassicalMmse:
        return "classical-mmse";
    }
    return "?";
}

std::vector<double> parse_snr_range(std::string_view spec)
{
    std::vector<double> parts;
    std::string s(spec);
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad SNR range '" + s + "' (expected start:step:stop)");
        }
    }
    if (parts.size() == 1)
        return parts;
    if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0])
        throw ConfigError("bad SNR range '" + s + "' (expected start:step:stop with step > 0)");
    std::vector<double> out;
    for (unsigned i = 0;; ++i) {
        const double v = parts[0] + i * parts[1];
        if (v > parts[2] + 1e-9 * parts[1])
            break;
        out.push_back(v);
    }
    return out;
}

void SimulationConfig::validate() const
{
    if (tx < 1 || rx < 1)
        throw ConfigError("need at least one transmit and one receive antenna");
    if (taps < 1)
        throw ConfigError("channel needs at least one tap");
    if (cyclic_prefix < taps)
        throw ConfigError("cyclic prefix C_p=" + std::to_string(cyclic_prefix) + " must be at least L=" +
                          std::to_string(taps));
    if (cyclic_prefix >= fft_size)
        throw ConfigError("cyclic prefix must be shorter than N_F");
    if (workers < 1)
        throw ConfigError("workers must be at least 1");
    if (min_bit_errors < 1 || max_frames < 1)
        throw ConfigError("min_bit_errors and max_frames must be positive");
    if (scheme == Scheme::OfdmIm && detector == DetectorKind::ClassicalMmse)
        throw ConfigError("detector classical-mmse needs scheme classical");
    if (scheme == Scheme::Classical && detector == DetectorKind::MmseLlr)
        throw ConfigError("detector mmse-llr needs scheme ofdm-im");

    const auto params = subblock_params();
    if (detector == DetectorKind::JointMl) {
        const Constellation c(modulation);
        const auto count = ml_hypothesis_count(IndexLookupTable(params), c, tx);
        if (count > ml_budget)
            throw BudgetError("joint-ml needs " + std::to_string(count) + " hypotheses per subblock, budget is " +
                              std::to_string(ml_budget));
    }
}

SubblockParams SimulationConfig::subblock_params() const
{
    const unsigned bps = Constellation(modulation).bits_per_symbol();
    if (scheme == Scheme::Classical)
        return SubblockParams::make(fft_size, 1, 1, bps);
    return SubblockParams::make(fft_size, subblock_size, active, bps);
}

double SimulationConfig::spectral_efficiency() const
{
    return static_cast<double>(bits_per_antenna()) * tx / (fft_size + cyclic_prefix);
}

double BerRecord::standard_error() const
{
    if (bits_sent == 0)
        return 0.0;
    return std::sqrt(ber * (1.0 - ber) / static_cast<double>(bits_sent));
}

namespace {

Bits random_bits(std::size_t n, Rng& rng)
{
    Bits out(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0)
            word = rng();
        out[i] = static_cast<std::uint8_t>(word & 1u);
        word >>= 1;
    }
    return out;
}

std::vector<CVector> transmit_receive(const SimulationConfig& cfg, const SubblockParams& p,
                                      const std::vector<CVector>& blocks, const MimoChannelRealization& channel,
                                      const NoiseSpec& noise, Rng& noise_rng)
{
    if (!cfg.time_domain) {
        auto received = apply_channel_freq(blocks, channel);
        for (auto& y : received)
            add_noise(y, noise.n0_freq, noise_rng);
        return received;
    }
    const double scale = energy_scale(p.fft_size, p.active_per_frame());
    std::vector<TimeDomainFrame> frames;
    frames.reserve(blocks.size());
    for (const auto& b : blocks)
        frames.push_back(to_time(b, cfg.cyclic_prefix, scale));
    const auto samples = apply_channel_time(frames, channel, noise.n0_time, noise_rng);
    std::vector<CVector> received;
    received.reserve(samples.size());
    for (const auto& s : samples)
        received.push_back(to_freq(s, cfg.cyclic_prefix, scale));
    return received;
}

std::uint64_t count_errors(const Bits& a, const Bits& b)
{
    std::uint64_t e = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e += a[i] != b[i];
    return e;
}

} // namespace

FrameOutcome simulate_frame(const SimulationConfig& cfg, double snr_db, std::uint64_t frame_index)
{
    const auto p = cfg.subblock_params();
    const IndexLookupTable table(p);
    const Constellation constellation(cfg.modulation);
    const auto noise = noise_spec(snr_db, p.fft_size, cfg.cyclic_prefix, p.bits_per_frame(), p.active, p.subblocks);

    auto bit_rng = substream(cfg.seed, frame_index, StreamPurpose::Bits);
    auto channel_rng = substream(cfg.seed, frame_index, StreamPurpose::Channel);
    auto noise_rng = substream(cfg.seed, frame_index, StreamPurpose::Noise);

    std::vector<Bits> sent(cfg.tx);
    std::vector<CVector> blocks(cfg.tx);
    for (unsigned t = 0; t < cfg.tx; ++t) {
        sent[t] = random_bits(p.bits_per_frame(), bit_rng);
        blocks[t] = interleave(assemble_frame(sent[t], table, constellation, t).block, p.subblocks, p.subblock_size);
    }

    const auto channel = sample_channel(cfg.tx, cfg.rx, cfg.taps, p.fft_size, channel_rng);
    const auto received = transmit_receive(cfg, p, blocks, channel, noise, noise_rng);
    const auto models = regroup(received, channel, p);

    FrameOutcome outcome;
    CmCounter cm;
    std::vector<std::vector<SubblockSymbols>> decided(cfg.tx, std::vector<SubblockSymbols>(p.subblocks));
    if (cfg.detector == DetectorKind::ClassicalMmse) {
        const auto sym = classical_mimo_ofdm_detect(models, constellation, noise.n0_freq, cm);
        for (unsigned g = 0; g < p.subblocks; ++g)
            for (unsigned t = 0; t < cfg.tx; ++t)
                decided[t][g] = {0, {sym[g][t]}};
    } else {
        const auto d = cfg.detector == DetectorKind::MmseLlr
                           ? detect_mmse_llr(models, table, constellation, noise.n0_freq, cm)
                           : detect_joint_ml(models, table, constellation, cm, cfg.ml_budget);
        for (unsigned t = 0; t < cfg.tx; ++t)
            for (unsigned g = 0; g < p.subblocks; ++g)
                decided[t][g] = d[t][g].symbols_only();
    }

    for (unsigned t = 0; t < cfg.tx; ++t)
        outcome.bit_errors += count_errors(sent[t], recover_bits(decided[t], table, constellation));
    outcome.cm = cm.count;
    return outcome;
}

BerRecord run_point(const SimulationConfig& cfg, double snr_db)
{
    cfg.validate();
    const auto p = cfg.subblock_params();
    const auto start = std::chrono::steady_clock::now();

    // Frames run in batches; the record covers the shortest frame prefix that
    // reaches min_bit_errors, so the result does not depend on batch or worker count.
    constexpr std::uint64_t batch_size = 32;
    std::vector<FrameOutcome> batch;
    std::uint64_t frames = 0, errors = 0, cm_total = 0;
    bool done = false;
    while (!done && frames < cfg.max_frames) {
        const std::uint64_t count = std::min(batch_size, cfg.max_frames - frames);
        batch.assign(count, {});
        const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, count));
        if (workers <= 1) {
            for (std::uint64_t i = 0; i < count; ++i)
                batch[i] = simulate_frame(cfg, snr_db, frames + i);
        } else {
            std::vector<std::exception_ptr> failures(workers);
            {
                std::vector<std::jthread> pool;
                for (unsigned w = 0; w < workers; ++w)
                    pool.emplace_back([&, w] {
                        try {
                            for (std::uint64_t i = w; i < count; i += workers)
                                batch[i] = simulate_frame(cfg, snr_db, frames + i);
                        } catch (...) {
                            failures[w] = std::current_exception();
                        }
                    });
            }
            for (auto& f : failures)
                if (f)
                    std::rethrow_exception(f);
        }
        for (const auto& o : batch) {
            ++frames;
            errors += o.bit_errors;
            cm_total += o.cm;
            if (errors >= cfg.min_bit_errors) {
                done = true;
                break;
            }
        }
    }

    BerRecord rec;
    rec.scheme = cfg.scheme;
    rec.detector = cfg.detector;
    rec.tx = cfg.tx;
    rec.rx = cfg.rx;
    rec.subblock_size = p.subblock_size;
    rec.active = p.active;
    rec.order = 1u << p.bits_per_symbol;
    rec.snr_db = snr_db;
    rec.frames = frames;
    rec.bits_sent = frames * p.bits_per_frame() * cfg.tx;
    rec.bit_errors = errors;
    rec.ber = static_cast<double>(errors) / static_cast<double>(rec.bits_sent);
    rec.cm_measured = static_cast<double>(cm_total) / (static_cast<double>(frames) * p.fft_size);
    rec.cm_formula = cm_count(cfg.tx, cfg.rx, rec.order, cfg.scheme);
    rec.hit_max_frames = !done;
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::string csv_header()
{
    return "scheme,detector,T,R,N,K,M,snr_db,bits,errors,ber,frames,cm_measured,cm_formula,status,wall_seconds";
}

std::string csv_row(const BerRecord& r, bool with_timing)
{
    std::ostringstream os;
    os << scheme_name(r.scheme) << ',' << detector_name(r.detector) << ',' << r.tx << ',' << r.rx << ','
       << r.subblock_size << ',' << r.active << ',' << r.order << ',' << std::fixed << std::setprecision(2)
       << r.snr_db << ',' << r.bits_sent << ',' << r.bit_errors << ',' << std::scientific << std::setprecision(6)
       << r.ber << ',' << r.frames << ',' << std::fixed << std::setprecision(3) << r.cm_measured << ','
       << r.cm_formula << ',' << (r.hit_max_frames ? "max_frames" : "converged");
    if (with_timing)
        os << ',' << std::setprecision(3) << r.wall_seconds;
    return os.str();
}

void write_csv(const std::vector<BerRecord>& records, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << csv_header() << '\n';
    for (const auto& r : records)
        out << csv_row(r) << '\n';
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

std::vector<BerRecord> run_sweep(const SimulationConfig& cfg, const std::optional<std::string>& csv_path,
                                 std::ostream* log)
{
    if (cfg.snr_db.empty())
        throw ConfigError("SNR list is empty");
    cfg.validate();
    if (csv_path) {
        // Fail on an unwritable path before spending time on the sweep.
        std::ofstream probe(*csv_path);
        if (!probe)
            throw IoError("cannot open '" + *csv_path + "' for writing");
    }

    std::vector<BerRecord> records;
    for (double snr : cfg.snr_db) {
        records.push_back(run_point(cfg, snr));
        if (log)
            *log << csv_row(records.back()) << std::endl;
    }

    if (log) {
        for (std::size_t i = 1; i < records.size(); ++i) {
            const auto& a = records[i - 1];
            const auto& b = records[i];
            if (b.snr_db > a.snr_db && b.ber > a.ber + 3.0 * std::hypot(a.standard_error(), b.standard_error()))
                *log << "warning: BER rises from " << a.ber << " at " << a.snr_db << " dB to " << b.ber << " at "
                     << b.snr_db << " dB\n";
        }
    }
    if (csv_path)
        write_csv(records, *csv_path);
    return records;
}

} // namespace mimoim
