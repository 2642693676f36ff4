#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mimoim/constellation.hpp"
#include "mimoim/detectors.hpp"
#include "mimoim/index_mapper.hpp"

namespace mimoim {

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme scheme);
DetectorKind parse_detector(std::string_view name);
std::string_view detector_name(DetectorKind detector);

/// "start:step:stop", inclusive of stop (with a small tolerance), or a single value.
std::vector<double> parse_snr_range(std::string_view spec);

struct SimulationConfig {
    Scheme scheme = Scheme::OfdmIm;
    DetectorKind detector = DetectorKind::MmseLlr;
    unsigned tx = 2;
    unsigned rx = 2;
    unsigned fft_size = 512;
    unsigned cyclic_prefix = 16;
    unsigned taps = 10;
    unsigned subblock_size = 4;
    unsigned active = 2;
    Modulation modulation = Modulation::Bpsk;
    std::vector<double> snr_db;
    std::uint64_t min_bit_errors = 200;
    std::uint64_t max_frames = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool time_domain = false;
    std::uint64_t ml_budget = default_ml_budget;

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
    /// Classical MIMO-OFDM is the one-subcarrier, always-active case N = K = 1.
    SubblockParams subblock_params() const;
    /// Bits per antenna per frame.
    unsigned bits_per_antenna() const { return subblock_params().bits_per_frame(); }
    /// m T / (N_F + C_p) bits/s/Hz.
    double spectral_efficiency() const;
};

struct BerRecord {
    Scheme scheme{};
    DetectorKind detector{};
    unsigned tx = 0, rx = 0, subblock_size = 0, active = 0, order = 0;
    double snr_db = 0.0;
    std::uint64_t bits_sent = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::uint64_t frames = 0;
    double cm_measured = 0.0; // per subcarrier
    std::uint64_t cm_formula = 0;
    bool hit_max_frames = false;
    double wall_seconds = 0.0;

    /// Binomial standard error of the BER estimate.
    double standard_error() const;
};

/// Outcome of one simulated frame.
struct FrameOutcome {
    std::uint64_t bit_errors = 0;
    std::uint64_t cm = 0;
};

/// Simulates frame `frame_index` at the given SNR; a pure function of (config, snr, index).
FrameOutcome simulate_frame(const SimulationConfig& config, double snr_db, std::uint64_t frame_index);

BerRecord run_point(const SimulationConfig& config, double snr_db);

/// One record per SNR; writes the CSV when `csv_path` is set. Monotonicity
/// violations beyond 3 standard errors are reported to `log` if non-null.
std::vector<BerRecord> run_sweep(const SimulationConfig& config, const std::optional<std::string>& csv_path = {},
                                 std::ostream* log = nullptr);

std::string csv_header();
/// One CSV row; `with_timing` appends wall_seconds.
std::string csv_row(const BerRecord& record, bool with_timing = true);
void write_csv(const std::vector<BerRecord>& records, const std::string& path);

/// Built-in consistency checks for the `selftest` subcommand; returns true when all pass.
bool run_selftest(std::ostream& out, std::uint64_t seed = 1);

} // namespace mimoim
