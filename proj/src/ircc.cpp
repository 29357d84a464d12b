#include "nbdet/ircc.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nbdet {

double IrccSpec::total_rate() const {
    double r = 0.0;
    for (const auto& e : entries) r += e.alpha * e.rate();
    return r;
}

void IrccSpec::validate() const {
    if (entries.empty()) throw std::invalid_argument("IrccSpec: no subcodes");
    double sum = 0.0;
    for (const auto& e : entries) {
        if (e.alpha < 0.0) throw std::invalid_argument("IrccSpec: negative weight");
        if (e.rate_num < 1 || e.rate_den <= e.rate_num)
            throw std::invalid_argument("IrccSpec: subcode rate must be in (0, 1)");
        sum += e.alpha;
    }
    // Inclusive 1e-6 slack (the bundled profile sits exactly on the boundary);
    // the extra term absorbs accumulation roundoff.
    if (std::abs(sum - 1.0) > 1e-6 + 1e-12)
        throw std::invalid_argument("IrccSpec: weights must sum to 1");
}

namespace {

// "0.15" -> 3/20, "3/20" -> 3/20; decimals are read at 1e-4 resolution.
void parse_rate(const std::string& tok, int& num, int& den) {
    const auto slash = tok.find('/');
    if (slash != std::string::npos) {
        num = std::stoi(tok.substr(0, slash));
        den = std::stoi(tok.substr(slash + 1));
    } else {
        const double r = std::stod(tok);
        num = static_cast<int>(std::lround(r * 10000.0));
        den = 10000;
    }
    const int g = std::gcd(num, den);
    if (g > 0) {
        num /= g;
        den /= g;
    }
}

}  // namespace

IrccSpec IrccSpec::from_stream(std::istream& in) {
    IrccSpec spec;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        IrccEntry e;
        std::string rate_tok;
        if (!(row >> e.j >> rate_tok >> e.alpha)) continue;  // blank / comment line
        parse_rate(rate_tok, e.rate_num, e.rate_den);
        spec.entries.push_back(e);
    }
    spec.validate();
    return spec;
}

IrccSpec IrccSpec::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("IrccSpec: cannot open " + path);
    return from_stream(in);
}

IrccSpec IrccSpec::reference_profile() {
    IrccSpec spec;
    const struct {
        int j;
        int num, den;
        double alpha;
    } rows[] = {
        {1, 1, 10, 0.254042},  {2, 3, 20, 0.292594}, {3, 1, 5, 0.003651},
        {4, 1, 4, 0.133594},   {5, 3, 10, 0.054518}, {6, 7, 20, 0.032276},
        {7, 2, 5, 0.092666},   {8, 9, 20, 0.000000}, {9, 1, 2, 0.000000},
        {10, 11, 20, 0.105838}, {11, 3, 5, 0.030820},
    };
    for (const auto& r : rows) spec.entries.push_back(IrccEntry{r.j, r.num, r.den, r.alpha});
    spec.validate();
    return spec;
}

IrccCodec::IrccCodec(RscCode code, const IrccSpec& spec, std::size_t info_len)
    : code_(code), info_len_(info_len) {
    code_.validate();
    spec.validate();
    if (info_len == 0) throw std::invalid_argument("IrccCodec: empty info word");

    // floor(alpha_j * K) per segment, residue to the last positive-weight
    // entry; the epsilon keeps products like 0.030820 * 100000 from landing
    // just below their exact decimal value.
    std::vector<std::size_t> lens(spec.entries.size(), 0);
    std::size_t assigned = 0;
    std::size_t last_pos = spec.entries.size();
    for (std::size_t i = 0; i < spec.entries.size(); ++i) {
        if (spec.entries[i].alpha <= 0.0) continue;
        lens[i] = static_cast<std::size_t>(
            std::floor(spec.entries[i].alpha * static_cast<double>(info_len) + 1e-6));
        assigned += lens[i];
        last_pos = i;
    }
    if (last_pos == spec.entries.size())
        throw std::invalid_argument("IrccCodec: all weights are zero");
    if (assigned > info_len) throw std::invalid_argument("IrccCodec: weights overflow info length");
    lens[last_pos] += info_len - assigned;

    std::size_t info_off = 0, tx_off = 0;
    for (std::size_t i = 0; i < spec.entries.size(); ++i) {
        if (lens[i] == 0) continue;
        IrccSegment seg;
        seg.entry = spec.entries[i];
        seg.adapter = RateAdapter::for_rate(seg.entry.rate_num, seg.entry.rate_den);
        seg.info_off = info_off;
        seg.info_len = lens[i];
        seg.tx_off = tx_off;
        seg.tx_len =
            seg.adapter.tx_length(2 * (lens[i] + static_cast<std::size_t>(code_.memory)));
        info_off += seg.info_len;
        tx_off += seg.tx_len;
        segments_.push_back(std::move(seg));
    }
    coded_len_ = tx_off;
}

Bits IrccCodec::encode(const Bits& info) const {
    if (info.size() != info_len_) throw std::invalid_argument("IrccCodec: info length mismatch");
    Bits out;
    out.reserve(coded_len_);
    for (const auto& seg : segments_) {
        const Bits part(info.begin() + static_cast<std::ptrdiff_t>(seg.info_off),
                        info.begin() + static_cast<std::ptrdiff_t>(seg.info_off + seg.info_len));
        const Bits coded = nbdet::encode(code_, seg.adapter, part);
        out.insert(out.end(), coded.begin(), coded.end());
    }
    return out;
}

BcjrResult IrccCodec::decode(const std::vector<double>& coded_priors, BcjrMode mode) const {
    if (coded_priors.size() != coded_len_)
        throw std::invalid_argument("IrccCodec: coded length mismatch");
    BcjrResult all;
    all.extrinsic.reserve(coded_len_);
    all.info_app.reserve(info_len_);
    for (const auto& seg : segments_) {
        const std::vector<double> part(
            coded_priors.begin() + static_cast<std::ptrdiff_t>(seg.tx_off),
            coded_priors.begin() + static_cast<std::ptrdiff_t>(seg.tx_off + seg.tx_len));
        BcjrResult r = bcjr_decode(code_, seg.adapter, part, mode);
        all.extrinsic.insert(all.extrinsic.end(), r.extrinsic.begin(), r.extrinsic.end());
        all.info_app.insert(all.info_app.end(), r.info_app.begin(), r.info_app.end());
    }
    return all;
}

IrccCodec assemble_ircc(const RscCode& code, const IrccSpec& spec, std::size_t info_len) {
    return IrccCodec(code, spec, info_len);
}

}  // namespace nbdet
