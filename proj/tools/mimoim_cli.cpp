// Command-line front end: BER sweeps, self-test and look-up table printing.

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>

#include "mimoim/errors.hpp"
#include "mimoim/index_mapper.hpp"
#include "mimoim/sim.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kSelftestFailed = 1,
    kConfigError = 2,
    kNumericError = 3,
    kIoError = 4,
};

std::pair<unsigned, unsigned> parse_txrx(const std::string& s)
{
    const auto x = s.find_first_of("xX");
    if (x == std::string::npos)
        throw mimoim::ConfigError("bad --txrx '" + s + "' (expected TxR, e.g. 2x2)");
    try {
        return {static_cast<unsigned>(std::stoul(s.substr(0, x))), static_cast<unsigned>(std::stoul(s.substr(x + 1)))};
    } catch (const std::exception&) {
        throw mimoim::ConfigError("bad --txrx '" + s + "' (expected TxR, e.g. 2x2)");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"MIMO-OFDM with index modulation: link-level BER simulator"};
    app.set_config("--config", "", "Read options from a TOML/INI file; command-line flags take precedence");
    app.require_subcommand(1);

    std::string scheme = "ofdm-im", detector, txrx = "2x2", mod = "bpsk", snr = "0:5:30";
    std::string out_path;
    unsigned n = 4, k = 2, nfft = 512, cp = 16, taps = 10, workers = 1;
    std::uint64_t seed = 1, min_errors = 200, max_frames = 100000, budget = mimoim::default_ml_budget;
    bool time_domain = false;

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo BER sweep over SNR");
    sweep->add_option("--scheme", scheme, "ofdm-im | classical")->capture_default_str();
    sweep->add_option("--detector", detector, "mmse-llr | joint-ml | classical-mmse (default follows the scheme)");
    sweep->add_option("--txrx", txrx, "antenna configuration TxR")->capture_default_str();
    sweep->add_option("--n", n, "subcarriers per subblock N")->capture_default_str();
    sweep->add_option("--k", k, "active subcarriers per subblock K")->capture_default_str();
    sweep->add_option("--mod", mod, "bpsk | qpsk | qam16")->capture_default_str();
    sweep->add_option("--snr", snr, "SNR list in dB as start:step:stop")->capture_default_str();
    sweep->add_option("--seed", seed, "master seed")->capture_default_str();
    sweep->add_option("--min-errors", min_errors, "stop a point after this many bit errors")->capture_default_str();
    sweep->add_option("--max-frames", max_frames, "frame cap per point")->capture_default_str();
    sweep->add_option("--out", out_path, "CSV output file");
    sweep->add_option("--workers", workers, "worker threads")->capture_default_str();
    sweep->add_option("--nfft", nfft, "FFT size N_F")->capture_default_str();
    sweep->add_option("--cp", cp, "cyclic prefix length C_p")->capture_default_str();
    sweep->add_option("--taps", taps, "channel taps L")->capture_default_str();
    sweep->add_option("--ml-budget", budget, "joint-ml hypothesis budget per subblock")->capture_default_str();
    sweep->add_flag("--time-domain", time_domain, "run the IFFT/CP/convolution chain instead of the frequency-domain model");

    auto* selftest = app.add_subcommand("selftest", "run the built-in equivalence and oracle checks");
    selftest->add_option("--seed", seed, "master seed")->capture_default_str();

    unsigned table_n = 0, table_k = 0;
    auto* tables = app.add_subcommand("tables", "print the index look-up table (both N=4 tables by default)");
    tables->add_option("--n", table_n, "subcarriers per subblock N");
    tables->add_option("--k", table_k, "active subcarriers per subblock K");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*tables) {
            std::vector<std::pair<unsigned, unsigned>> which;
            if (table_n == 0 && table_k == 0)
                which = {{4, 2}, {4, 3}};
            else if (table_n == 0 || table_k == 0)
                throw mimoim::ConfigError("tables: give both --n and --k");
            else
                which = {{table_n, table_k}};
            for (std::size_t i = 0; i < which.size(); ++i) {
                const auto p = mimoim::SubblockParams::make(which[i].first, which[i].first, which[i].second, 1);
                std::cout << (i ? "\n" : "") << mimoim::format_lookup_table(mimoim::IndexLookupTable(p));
            }
            return kOk;
        }

        if (*selftest)
            return mimoim::run_selftest(std::cout, seed) ? kOk : kSelftestFailed;

        mimoim::SimulationConfig cfg;
        cfg.scheme = mimoim::parse_scheme(scheme);
        if (detector.empty())
            cfg.detector =
                cfg.scheme == mimoim::Scheme::Classical ? mimoim::DetectorKind::ClassicalMmse : mimoim::DetectorKind::MmseLlr;
        else
            cfg.detector = mimoim::parse_detector(detector);
        std::tie(cfg.tx, cfg.rx) = parse_txrx(txrx);
        cfg.subblock_size = n;
        cfg.active = k;
        cfg.modulation = mimoim::parse_modulation(mod);
        cfg.snr_db = mimoim::parse_snr_range(snr);
        cfg.seed = seed;
        cfg.min_bit_errors = min_errors;
        cfg.max_frames = max_frames;
        cfg.workers = workers;
        cfg.fft_size = nfft;
        cfg.cyclic_prefix = cp;
        cfg.taps = taps;
        cfg.ml_budget = budget;
        cfg.time_domain = time_domain;
        cfg.validate();

        const auto p = cfg.subblock_params();
        std::cout << "# " << mimoim::scheme_name(cfg.scheme) << " / " << mimoim::detector_name(cfg.detector) << ", "
                  << cfg.tx << "x" << cfg.rx << ", N=" << p.subblock_size << " K=" << p.active << " "
                  << mimoim::modulation_name(cfg.modulation) << ", N_F=" << cfg.fft_size << " C_p=" << cfg.cyclic_prefix
                  << " L=" << cfg.taps << ", seed " << cfg.seed << "\n";
        std::cout << "# bits per antenna per frame m=" << p.bits_per_frame() << ", spectral efficiency "
                  << std::fixed << std::setprecision(3) << cfg.spectral_efficiency() << " bits/s/Hz\n";
        std::cout.unsetf(std::ios::floatfield);
        std::cout << mimoim::csv_header() << std::endl;
        mimoim::run_sweep(cfg, out_path.empty() ? std::nullopt : std::optional<std::string>(out_path), &std::cout);
        return kOk;
    } catch (const mimoim::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIoError;
    } catch (const mimoim::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumericError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const mimoim::BudgetError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const mimoim::LookupError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
}
