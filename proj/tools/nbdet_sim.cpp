// Command-line experiment driver. Subcommands:
//   llr-sweep   detector transfer curves over a real-axis observation grid
//   ber         iterative BICM-ID Monte-Carlo bit error rates
//   complexity  prior-aggregation branch counts per method
//
// Every flag can also be set through an environment variable named NBDET_
// plus the flag in upper snake case (e.g. --snr-db -> NBDET_SNR_DB).

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbdet/sim.hpp"

namespace {

std::string env_name(const std::string& flag) {
    std::string s = "NBDET_";
    for (char ch : flag) s.push_back(ch == '-' ? '_' : static_cast<char>(std::toupper(ch)));
    return s;
}

void parse_grid(const std::string& text, nbdet::SweepConfig& cfg) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw CLI::ValidationError("--grid expects min:max:step");
    cfg.grid_min = std::stod(text.substr(0, a));
    cfg.grid_max = std::stod(text.substr(a + 1, b - a - 1));
    cfg.grid_step = std::stod(text.substr(b + 1));
}

std::vector<double> read_llr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open prior file: " + path);
    std::vector<double> llrs;
    double v = 0.0;
    while (in >> v) llrs.push_back(v);
    return llrs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"soft-input soft-output detection experiments (nbdet " +
                 nbdet::nbdet_version() + ")"};
    app.require_subcommand(1);

    std::string constellation = "dsm-epa:16";
    std::string detector = "app";
    std::string maxstar = "exact";
    std::string out_path;
    std::string grid = "-2:2:0.01";
    std::string priors_path;
    std::string code_path;
    std::string decoder = "full";
    std::vector<double> snr_db;
    std::uint64_t seed = 1;
    std::size_t info_len = 10000;
    int iters = 20;
    int bit_index = 0;
    int max_blocks = 100;
    int target_errors = 100;
    int wave = 4;
    int mother_memory = 2;
    double stop_ber = -1.0;
    std::vector<int> n_list{2, 4, 8, 16};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--constellation", constellation,
                        "dsm-epa:N | bpsk | qpsk | psk8 | qam16")
            ->envname(env_name("constellation"));
        sub->add_option("--seed", seed, "base seed")->envname(env_name("seed"));
        sub->add_option("--out", out_path, "output CSV path")
            ->required()
            ->envname(env_name("out"));
    };

    CLI::App* sweep = app.add_subcommand("llr-sweep", "detector LLR vs Re{y} curves");
    add_common(sweep);
    sweep->add_option("--snr-db", snr_db, "SNR in dB (one value)")
        ->delimiter(',')
        ->envname(env_name("snr-db"));
    sweep->add_option("--bit-index", bit_index, "bit whose LLR is reported")
        ->envname(env_name("bit-index"));
    sweep->add_option("--grid", grid, "min:max:step over Re{y}")->envname(env_name("grid"));
    sweep->add_option("--priors", priors_path, "file of a-priori LLRs, one per line")
        ->envname(env_name("priors"));

    CLI::App* ber = app.add_subcommand("ber", "iterative BICM-ID bit error rate");
    add_common(ber);
    ber->add_option("--detector", detector, "app | maxlog-bit | maxlog-sym | maxlog-bitsym")
        ->envname(env_name("detector"));
    ber->add_option("--maxstar", maxstar, "exact | approx-max | table-lookup")
        ->envname(env_name("maxstar"));
    ber->add_option("--snr-db", snr_db, "SNR list in dB")
        ->delimiter(',')
        ->required()
        ->envname(env_name("snr-db"));
    ber->add_option("--info-len", info_len, "info bits per block")->envname(env_name("info-len"));
    ber->add_option("--iters", iters, "detector/decoder iterations")->envname(env_name("iters"));
    ber->add_option("--code", code_path, "irregular code table (j R_j alpha_j rows)")
        ->envname(env_name("code"));
    ber->add_option("--max-blocks", max_blocks, "blocks per SNR point")
        ->envname(env_name("max-blocks"));
    ber->add_option("--target-errors", target_errors, "stop a point after this many errors")
        ->envname(env_name("target-errors"));
    ber->add_option("--wave", wave, "scheduling wave size")->envname(env_name("wave"));
    ber->add_option("--stop-ber", stop_ber, "stop the SNR walk once final BER drops below")
        ->envname(env_name("stop-ber"));
    ber->add_option("--decoder", decoder, "full | maxlog")->envname(env_name("decoder"));
    ber->add_option("--mother-memory", mother_memory, "mother code memory: 2 or 4")
        ->envname(env_name("mother-memory"));

    CLI::App* cx = app.add_subcommand("complexity", "prior-aggregation branch counts");
    add_common(cx);
    cx->add_option("--n-list", n_list, "even layer counts")
        ->delimiter(',')
        ->envname(env_name("n-list"));

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            nbdet::SweepConfig cfg;
            cfg.constellation = nbdet::ConstellationSpec::parse(constellation);
            if (!snr_db.empty()) cfg.snr_db = snr_db.front();
            cfg.bit_index = bit_index;
            parse_grid(grid, cfg);
            if (!priors_path.empty()) cfg.prior_llrs = read_llr_file(priors_path);
            const auto rows = nbdet::run_llr_sweep(cfg);
            nbdet::write_sweep_csv(out_path, rows);
            nbdet::write_manifest(out_path, "llr-sweep", nbdet::sweep_config_json(cfg));
            std::cout << "wrote " << out_path << " (" << rows.size() << " rows)\n";
        } else if (ber->parsed()) {
            nbdet::BerConfig cfg;
            cfg.constellation = nbdet::ConstellationSpec::parse(constellation);
            cfg.detector.algorithm = nbdet::algorithm_from_string(detector);
            cfg.detector.maxstar_impl = nbdet::maxstar_impl_from_string(maxstar);
            if (cfg.detector.algorithm == nbdet::DetectorAlgorithm::maxlog_bit ||
                cfg.detector.algorithm == nbdet::DetectorAlgorithm::maxlog_sym) {
                cfg.detector.maxstar_impl = nbdet::MaxstarImpl::approx_max;
            }
            cfg.snr_db_list = snr_db;
            cfg.info_len = info_len;
            cfg.iterations = iters;
            cfg.seed = seed;
            cfg.max_blocks = max_blocks;
            cfg.target_errors = target_errors;
            cfg.wave = wave;
            cfg.stop_ber = stop_ber;
            cfg.code_config = code_path;
            cfg.decoder_mode = decoder == "maxlog" ? nbdet::BcjrMode::maxlog : nbdet::BcjrMode::full;
            if (mother_memory == 2) {
                cfg.mother = nbdet::RscCode::memory2();
            } else if (mother_memory == 4) {
                cfg.mother = nbdet::RscCode::memory4();
            } else {
                throw std::invalid_argument("--mother-memory must be 2 or 4");
            }
            const auto records = nbdet::run_ber(cfg);
            nbdet::write_ber_csv(out_path, records);
            nbdet::write_manifest(out_path, "ber", nbdet::ber_config_json(cfg));
            std::cout << "wrote " << out_path << " (" << records.size() << " rows)\n";
        } else if (cx->parsed()) {
            nbdet::ComplexityConfig cfg;
            cfg.n_list = n_list;
            cfg.seed = seed;
            const auto rows = nbdet::run_complexity(cfg);
            nbdet::write_complexity_csv(out_path, rows);
            nbdet::write_manifest(out_path, "complexity", nbdet::complexity_config_json(cfg));
            std::cout << "wrote " << out_path << " (" << rows.size() << " rows)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
