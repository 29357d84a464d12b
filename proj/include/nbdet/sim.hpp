#pragma once

// Experiment drivers: LLR sweeps over the real axis, iterative BICM-ID BER
// runs, and branch-count instrumentation. All emit headered CSV (9
// significant digits) plus a JSON run manifest; every stochastic quantity
// derives from one explicit 64-bit seed.

#include <cstdint>
#include <string>
#include <vector>

#include "nbdet/constellation.hpp"
#include "nbdet/detector.hpp"
#include "nbdet/rsc.hpp"

namespace nbdet {

std::string nbdet_version();

// "dsm-epa:16" | "bpsk" | "qpsk" | "psk8" | "qam16"
struct ConstellationSpec {
    bool is_dsm_epa = true;
    int n_bits = 16;      // dsm-epa only
    Scheme scheme = Scheme::bpsk;

    static ConstellationSpec parse(const std::string& text);
    Constellation build() const;
    std::string name() const;
};

struct SweepConfig {
    ConstellationSpec constellation;           // default dsm-epa:16
    double snr_db = 12.0;
    double grid_min = -2.0, grid_max = 2.0, grid_step = 0.01;
    int bit_index = 0;                         // a real-layer bit
    std::vector<double> prior_llrs;            // empty = uniform priors
};

struct SweepRow {
    double re_y;
    double l_app, l_maxlog_bit, l_maxlog_sym;
};

std::vector<SweepRow> run_llr_sweep(const SweepConfig& cfg);

struct BerConfig {
    ConstellationSpec constellation;           // e.g. dsm-epa:4
    DetectorMode detector;
    std::vector<double> snr_db_list;
    std::size_t info_len = 10000;
    int iterations = 20;
    std::uint64_t seed = 1;
    int max_blocks = 100;                      // per SNR point
    int target_errors = 100;                   // checked between waves
    int wave = 4;                              // scheduling granularity
    double stop_ber = -1.0;                    // >= 0: stop the SNR walk once reached
    std::string code_config;                   // irregular-code table; empty = one rate-1/2 subcode
    BcjrMode decoder_mode = BcjrMode::full;
    // Desk-scale default; pass memory4() to match the irregular-code setup.
    RscCode mother = RscCode::memory2();
};

struct BerRecord {
    double snr_db = 0.0;
    int iteration = 0;          // 1-based
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
    double ber = 0.0;           // errors / bits
    int blocks = 0;
};

std::vector<BerRecord> run_ber(const BerConfig& cfg);

struct ComplexityConfig {
    std::vector<int> n_list{2, 4, 8, 16};
    std::uint64_t seed = 1;    // randomized priors exercise state merging
};

struct ComplexityRow {
    int n_bits = 0;
    std::uint64_t branches_naive = 0;  // worst case over (n, b)
    std::uint64_t branches_dp = 0;     // worst case over (n, b)
};

std::vector<ComplexityRow> run_complexity(const ComplexityConfig& cfg);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
void write_ber_csv(const std::string& path, const std::vector<BerRecord>& records);
void write_complexity_csv(const std::string& path, const std::vector<ComplexityRow>& rows);

// Reproducibility sidecar: full config echo, seed, and version string; no
// timestamps so identical runs produce identical bytes.
void write_manifest(const std::string& csv_path, const std::string& subcommand,
                    const std::string& config_json);

std::string sweep_config_json(const SweepConfig& cfg);
std::string ber_config_json(const BerConfig& cfg);
std::string complexity_config_json(const ComplexityConfig& cfg);

}  // namespace nbdet
