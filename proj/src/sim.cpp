#include "nbdet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "nbdet/channel.hpp"
#include "nbdet/interleaver.hpp"
#include "nbdet/ircc.hpp"
#include "nbdet/prior.hpp"
#include "nbdet/rng.hpp"

namespace nbdet {

std::string nbdet_version() {
#ifdef NBDET_VERSION
    return NBDET_VERSION;
#else
    return "unversioned";
#endif
}

ConstellationSpec ConstellationSpec::parse(const std::string& text) {
    ConstellationSpec spec;
    const std::string prefix = "dsm-epa:";
    if (text.rfind(prefix, 0) == 0) {
        spec.is_dsm_epa = true;
        spec.n_bits = std::stoi(text.substr(prefix.size()));
        if (spec.n_bits < 2 || spec.n_bits % 2 != 0)
            throw std::invalid_argument("constellation: dsm-epa bit count must be even and >= 2");
        return spec;
    }
    spec.is_dsm_epa = false;
    spec.scheme = scheme_from_string(text);
    return spec;
}

Constellation ConstellationSpec::build() const {
    return is_dsm_epa ? Constellation::build_dsm_epa(n_bits) : Constellation::build_bijective(scheme);
}

std::string ConstellationSpec::name() const {
    return is_dsm_epa ? "dsm-epa:" + std::to_string(n_bits) : to_string(scheme);
}

std::vector<SweepRow> run_llr_sweep(const SweepConfig& cfg) {
    if (!(cfg.grid_step > 0.0) || !(cfg.grid_max >= cfg.grid_min))
        throw std::invalid_argument("run_llr_sweep: bad grid");
    const Constellation c = cfg.constellation.build();
    if (cfg.bit_index < 0 || cfg.bit_index >= c.n_bits())
        throw std::invalid_argument("run_llr_sweep: bit index out of range");
    const AwgnChannel ch(snr_db_to_sigma2(cfg.snr_db), 0);
    BitPriorSet priors = cfg.prior_llrs.empty() ? BitPriorSet::uniform(c.n_bits())
                                                : BitPriorSet::from_llrs(cfg.prior_llrs);
    if (priors.n_bits() != c.n_bits())
        throw std::invalid_argument("run_llr_sweep: prior length mismatch");

    const auto steps = static_cast<long>(std::llround((cfg.grid_max - cfg.grid_min) / cfg.grid_step));
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(steps) + 1);
    const std::size_t n = static_cast<std::size_t>(cfg.bit_index);
    for (long i = 0; i <= steps; ++i) {
        const double re = cfg.grid_min + static_cast<double>(i) * cfg.grid_step;
        const ChannelObservation y(re, 0.0);
        SweepRow row;
        row.re_y = re;
        row.l_app = app_llr(c, priors, y, ch, LlrDomain::symbol)[n];
        row.l_maxlog_bit = maxlog_bit_llr(c, priors, y, ch)[n];
        row.l_maxlog_sym = maxlog_sym_llr(c, priors, y, ch)[n];
        rows.push_back(row);
    }
    return rows;
}

namespace {

IrccSpec single_rate_half() {
    IrccSpec spec;
    spec.entries.push_back(IrccEntry{1, 1, 2, 1.0});
    return spec;
}

// One BICM-ID block: encode, interleave, map, transmit, then iterate
// detector <-> decoder, exchanging extrinsic LLRs. Records the info-bit
// error count after each decoder pass; a block that decodes error-free
// stops early and stays error-free for the remaining iterations.
std::vector<std::uint64_t> run_block(const Constellation& c, const IrccCodec& codec,
                                     const DetectorMode& det, BcjrMode dec_mode, double sigma2,
                                     int iterations, std::uint64_t block_seed) {
    const int N = c.n_bits();
    const std::size_t K = codec.info_len();
    const std::size_t C = codec.coded_len();
    const std::size_t n_sym = (C + static_cast<std::size_t>(N) - 1) / static_cast<std::size_t>(N);
    const std::size_t padded = n_sym * static_cast<std::size_t>(N);

    std::mt19937_64 bit_eng(split_seed(block_seed, 1));
    Bits info(K);
    for (auto& b : info) b = static_cast<std::uint8_t>(bit_eng() & 1u);
    const Bits coded = codec.encode(info);
    const Interleaver il = Interleaver::random(C, split_seed(block_seed, 2));
    const Bits tx = il.interleave(coded);

    AwgnChannel ch(sigma2, split_seed(block_seed, 3));
    std::vector<ChannelObservation> obs(n_sym);
    for (std::size_t g = 0; g < n_sym; ++g) {
        std::uint32_t pattern = 0;
        for (int j = 0; j < N; ++j) {
            const std::size_t pos = g * static_cast<std::size_t>(N) + static_cast<std::size_t>(j);
            const std::uint8_t bit = pos < C ? tx[pos] : 0;  // zero-padded tail symbol
            pattern |= static_cast<std::uint32_t>(bit) << j;
        }
        obs[g] = ch.transmit(c.point(c.map_index(pattern)).value);
    }

    // Detector priors in interleaved order; pad bits are known zeros, so
    // they carry a saturated prior throughout.
    std::vector<double> det_prior(padded, 0.0);
    for (std::size_t pos = C; pos < padded; ++pos) det_prior[pos] = kLlrClamp;

    std::vector<std::uint64_t> errors(static_cast<std::size_t>(iterations), 0);
    std::vector<double> det_ext(C);
    std::vector<double> group(static_cast<std::size_t>(N));
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t g = 0; g < n_sym; ++g) {
            const std::size_t base = g * static_cast<std::size_t>(N);
            group.assign(det_prior.begin() + static_cast<std::ptrdiff_t>(base),
                         det_prior.begin() + static_cast<std::ptrdiff_t>(base + N));
            const BitPriorSet pr = BitPriorSet::from_llrs(group);
            const LlrVector e = detect(c, pr, obs[g], ch, det);
            for (int j = 0; j < N; ++j) {
                const std::size_t pos = base + static_cast<std::size_t>(j);
                if (pos < C) det_ext[pos] = e[static_cast<std::size_t>(j)];
            }
        }
        const std::vector<double> dec_prior = il.deinterleave(det_ext);
        const BcjrResult r = codec.decode(dec_prior, dec_mode);

        std::uint64_t err = 0;
        for (std::size_t k = 0; k < K; ++k) {
            const std::uint8_t decided = r.info_app[k] > 0.0 ? 0 : 1;
            err += decided != info[k];
        }
        errors[static_cast<std::size_t>(it)] = err;
        if (err == 0) break;  // converged; stays error-free if iterated further

        const std::vector<double> nxt = il.interleave(r.extrinsic);
        std::copy(nxt.begin(), nxt.end(), det_prior.begin());
    }
    return errors;
}

}  // namespace

std::vector<BerRecord> run_ber(const BerConfig& cfg) {
    cfg.detector.validate();
    if (cfg.info_len < 1 || cfg.iterations < 1 || cfg.snr_db_list.empty())
        throw std::invalid_argument("run_ber: need info_len >= 1, iterations >= 1, SNR list");
    if (cfg.max_blocks < 1 || cfg.wave < 1)
        throw std::invalid_argument("run_ber: need max_blocks >= 1 and wave >= 1");
    const Constellation c = cfg.constellation.build();
    const IrccSpec spec =
        cfg.code_config.empty() ? single_rate_half() : IrccSpec::from_file(cfg.code_config);
    const IrccCodec codec(cfg.mother, spec, cfg.info_len);
    const std::size_t K = codec.info_len();
    const std::size_t I = static_cast<std::size_t>(cfg.iterations);

    std::vector<BerRecord> records;
    for (double snr_db : cfg.snr_db_list) {
        const double sigma2 = snr_db_to_sigma2(snr_db);
        const std::uint64_t snr_stream =
            split_seed(cfg.seed, static_cast<std::uint64_t>(std::llround(snr_db * 1000.0)));
        std::vector<std::uint64_t> errors(I, 0);
        int blocks = 0;
        while (blocks < cfg.max_blocks) {
            const int n = std::min(cfg.wave, cfg.max_blocks - blocks);
            for (int w = 0; w < n; ++w) {
                const std::uint64_t bseed =
                    split_seed(snr_stream, static_cast<std::uint64_t>(blocks + w));
                const auto blk = run_block(c, codec, cfg.detector, cfg.decoder_mode, sigma2,
                                           cfg.iterations, bseed);
                for (std::size_t it = 0; it < I; ++it) errors[it] += blk[it];
            }
            blocks += n;
            if (errors[I - 1] >= static_cast<std::uint64_t>(cfg.target_errors)) break;
        }
        const std::uint64_t bits = static_cast<std::uint64_t>(blocks) * K;
        for (std::size_t it = 0; it < I; ++it) {
            BerRecord rec;
            rec.snr_db = snr_db;
            rec.iteration = static_cast<int>(it) + 1;
            rec.errors = errors[it];
            rec.bits = bits;
            rec.ber = static_cast<double>(errors[it]) / static_cast<double>(bits);
            rec.blocks = blocks;
            records.push_back(rec);
        }
        if (cfg.stop_ber >= 0.0 && records.back().ber < cfg.stop_ber) break;
    }
    return records;
}

std::vector<ComplexityRow> run_complexity(const ComplexityConfig& cfg) {
    std::vector<ComplexityRow> rows;
    for (int n_bits : cfg.n_list) {
        const Constellation c = Constellation::build_dsm_epa(n_bits);
        std::mt19937_64 eng(split_seed(cfg.seed, static_cast<std::uint64_t>(n_bits)));
        std::vector<double> llrs(static_cast<std::size_t>(n_bits));
        for (auto& l : llrs) l = 10.0 * uniform_unit(eng) - 5.0;
        const BitPriorSet priors = BitPriorSet::from_llrs(llrs);
        ComplexityRow row;
        row.n_bits = n_bits;
        for (int n = 0; n < n_bits; ++n) {
            for (int b = 0; b < 2; ++b) {
                row.branches_naive = std::max(
                    row.branches_naive,
                    aggregate_log_priors(c, priors, n, b, AggregateMethod::naive).branch_count);
                row.branches_dp = std::max(
                    row.branches_dp,
                    aggregate_log_priors(c, priors, n, b, AggregateMethod::layered_dp).branch_count);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    auto out = open_out(path);
    out << "re_y,L_app,L_maxlog_bit,L_maxlog_sym\n";
    for (const auto& r : rows) {
        out << fmt_double(r.re_y) << ',' << fmt_double(r.l_app) << ','
            << fmt_double(r.l_maxlog_bit) << ',' << fmt_double(r.l_maxlog_sym) << '\n';
    }
}

void write_ber_csv(const std::string& path, const std::vector<BerRecord>& records) {
    auto out = open_out(path);
    out << "snr_db,iteration,errors,bits,ber,blocks\n";
    for (const auto& r : records) {
        out << fmt_double(r.snr_db) << ',' << r.iteration << ',' << r.errors << ',' << r.bits
            << ',' << fmt_double(r.ber) << ',' << r.blocks << '\n';
    }
}

void write_complexity_csv(const std::string& path, const std::vector<ComplexityRow>& rows) {
    auto out = open_out(path);
    out << "n_bits,branches_naive,branches_dp\n";
    for (const auto& r : rows) {
        out << r.n_bits << ',' << r.branches_naive << ',' << r.branches_dp << '\n';
    }
}

void write_manifest(const std::string& csv_path, const std::string& subcommand,
                    const std::string& config_json) {
    nlohmann::json j;
    j["tool"] = "nbdet_sim";
    j["version"] = nbdet_version();
    j["subcommand"] = subcommand;
    j["output"] = csv_path;
    j["config"] = nlohmann::json::parse(config_json);
    auto out = open_out(csv_path + ".manifest.json");
    out << j.dump(2) << '\n';
}

std::string sweep_config_json(const SweepConfig& cfg) {
    nlohmann::json j;
    j["constellation"] = cfg.constellation.name();
    j["snr_db"] = cfg.snr_db;
    j["grid"] = {cfg.grid_min, cfg.grid_max, cfg.grid_step};
    j["bit_index"] = cfg.bit_index;
    j["prior_llrs"] = cfg.prior_llrs.empty() ? nlohmann::json("uniform") : nlohmann::json(cfg.prior_llrs);
    return j.dump();
}

std::string ber_config_json(const BerConfig& cfg) {
    nlohmann::json j;
    j["constellation"] = cfg.constellation.name();
    j["detector"] = to_string(cfg.detector.algorithm);
    j["maxstar"] = to_string(cfg.detector.maxstar_impl);
    j["snr_db"] = cfg.snr_db_list;
    j["info_len"] = cfg.info_len;
    j["iterations"] = cfg.iterations;
    j["seed"] = cfg.seed;
    j["max_blocks"] = cfg.max_blocks;
    j["target_errors"] = cfg.target_errors;
    j["wave"] = cfg.wave;
    j["stop_ber"] = cfg.stop_ber;
    j["code"] = cfg.code_config.empty() ? "single-rate-1/2" : cfg.code_config;
    j["decoder"] = cfg.decoder_mode == BcjrMode::full ? "full" : "maxlog";
    j["mother"] = {{"memory", cfg.mother.memory},
                   {"feedback", cfg.mother.feedback},
                   {"feedforward", cfg.mother.feedforward}};
    j["early_stop"] = "genie zero-error per block";
    return j.dump();
}

std::string complexity_config_json(const ComplexityConfig& cfg) {
    nlohmann::json j;
    j["n_list"] = cfg.n_list;
    j["seed"] = cfg.seed;
    return j.dump();
}

}  // namespace nbdet
