#pragma once

// Irregular convolutional code: a weighted set of rate-adapted subcodes of
// one mother code, applied to consecutive segments of the info word. Segment
// j carries floor(alpha_j * K) info bits; the rounding residue goes to the
// last positive-weight segment; zero-weight subcodes are skipped.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbdet/rsc.hpp"

namespace nbdet {

struct IrccEntry {
    int j = 0;          // subcode index (1-based, as usually tabulated)
    int rate_num = 1;   // R_j = rate_num / rate_den
    int rate_den = 2;
    double alpha = 0.0; // fraction of info bits carried

    double rate() const { return static_cast<double>(rate_num) / rate_den; }
};

struct IrccSpec {
    std::vector<IrccEntry> entries;

    double total_rate() const;  // sum of alpha_j * R_j
    void validate() const;      // alpha_j >= 0, sum alpha_j = 1 +- 1e-6

    // Text format: comment lines start with '#'; rows are "j R_j alpha_j"
    // with R_j either a decimal (0.15) or a fraction (3/20).
    static IrccSpec from_stream(std::istream& in);
    static IrccSpec from_file(const std::string& path);

    // The 11-subcode profile with rates 0.10..0.60 used by the bundled
    // config; total rate ~ 1/4.
    static IrccSpec reference_profile();
};

struct IrccSegment {
    IrccEntry entry;
    RateAdapter adapter;
    std::size_t info_off = 0, info_len = 0;
    std::size_t tx_off = 0, tx_len = 0;
};

class IrccCodec {
  public:
    IrccCodec(RscCode code, const IrccSpec& spec, std::size_t info_len);

    const RscCode& code() const { return code_; }
    const std::vector<IrccSegment>& segments() const { return segments_; }
    std::size_t info_len() const { return info_len_; }
    std::size_t coded_len() const { return coded_len_; }
    double realized_rate() const {
        return static_cast<double>(info_len_) / static_cast<double>(coded_len_);
    }

    Bits encode(const Bits& info) const;
    BcjrResult decode(const std::vector<double>& coded_priors, BcjrMode mode) const;

  private:
    RscCode code_;
    std::vector<IrccSegment> segments_;
    std::size_t info_len_ = 0;
    std::size_t coded_len_ = 0;
};

IrccCodec assemble_ircc(const RscCode& code, const IrccSpec& spec, std::size_t info_len);

}  // namespace nbdet
