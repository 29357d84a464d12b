#pragma once

// Per-bit a-priori information and the aggregated symbol log-priors
// log P(z(x)). Bits are modeled as independent (interleaver assumption), so
// the mass of z(x) is a sum over products of per-bit probabilities. Two
// aggregation methods are provided: a direct tree walk over all 2^{N-1}
// excluded-bit patterns, and a layered dynamic program that merges
// partial-sum states of superposition constellations.

#include <cstdint>
#include <vector>

#include "nbdet/constellation.hpp"

namespace nbdet {

inline constexpr double kLlrClamp = 50.0;  // natural-log units

double clamp_llr(double llr);

// log P(b=0) for a given LLR (positive LLR means bit 0 more likely).
double log_p0_from_llr(double llr);

class BitPriorSet {
  public:
    static BitPriorSet uniform(int n_bits);
    // Input LLRs are clamped to +-kLlrClamp before conversion.
    static BitPriorSet from_llrs(const std::vector<double>& llrs);
    static BitPriorSet from_log_probs(std::vector<double> log_p0, std::vector<double> log_p1);

    int n_bits() const { return static_cast<int>(log_p0_.size()); }
    double log_p(int n, int bit) const { return bit ? log_p1_[n] : log_p0_[n]; }
    double llr(int n) const { return log_p0_[n] - log_p1_[n]; }
    const std::vector<double>& log_p0() const { return log_p0_; }
    const std::vector<double>& log_p1() const { return log_p1_; }

  private:
    std::vector<double> log_p0_, log_p1_;
};

enum class AggregateMethod { naive, layered_dp };

struct PriorAggregate {
    // log P(z(x)) for each x in X_n^(b), parallel to Constellation::subset(n,b).
    // The mass of z(x) is taken over the excluded bits only, so the values
    // for a fixed (n,b) sum to 1 in the probability domain.
    std::vector<double> log_pz;
    // Elementary combine operations: one per partial-state extension by one
    // bit (tree edge / trellis edge). The final per-symbol assembly is not
    // a branch, matching the 2^N - 2 count of the full pattern tree.
    std::uint64_t branch_count = 0;
};

PriorAggregate aggregate_log_priors(const Constellation& c, const BitPriorSet& priors,
                                    int n, int b, AggregateMethod method);

}  // namespace nbdet
