#pragma once

// Rate-1/2 recursive systematic convolutional mother code with a periodic
// puncture/repeat rate adapter, zero-state termination, and a SISO BCJR
// decoder (exact or max-log recursions).
//
// Mother stream layout: [sys_0, par_0, sys_1, par_1, ...]; one trellis step
// per info bit plus `memory` tail steps driving the register back to zero.
// The adapter maps this stream to the transmitted stream by emitting each
// mother position `count` times (0 = punctured), with the count pattern
// periodic over one rate period of the mother stream.

#include <cstdint>
#include <utility>
#include <vector>

namespace nbdet {

using Bits = std::vector<std::uint8_t>;

struct RscCode {
    int memory = 4;
    // Generator polynomial bitmasks, bit k = coefficient of D^k; the values
    // are conventionally quoted in octal.
    unsigned feedback = 023;
    unsigned feedforward = 035;

    void validate() const;
    static RscCode memory4() { return RscCode{4, 023, 035}; }
    static RscCode memory2() { return RscCode{2, 07, 05}; }
};

// Unrolled state machine of an RscCode. State bit i holds the register
// content d_{t-1-i} (most recent first).
struct Trellis {
    explicit Trellis(const RscCode& code);

    int memory;
    int n_states;
    std::vector<std::uint8_t> parity;      // [2*state + input]
    std::vector<std::uint16_t> next;       // [2*state + input]
    std::vector<std::uint8_t> term_input;  // [state] input stepping toward zero
};

class RateAdapter {
  public:
    // Effective rate p/q (reduced): p info bits -> q transmitted bits per
    // period. q == 2p keeps the mother stream; q > 2p repeats positions
    // round-robin; p < q < 2p keeps all systematic bits and spreads the
    // surviving parities evenly.
    static RateAdapter for_rate(int p, int q);
    static RateAdapter mother() { return for_rate(1, 2); }

    int rate_num() const { return p_; }
    int rate_den() const { return q_; }
    double effective_rate() const { return static_cast<double>(p_) / q_; }
    // Copies transmitted per mother position over one period of 2p positions.
    const std::vector<int>& counts() const { return counts_; }

    std::size_t tx_length(std::size_t mother_len) const;
    // Inverse of tx_length over even mother lengths; throws if no match.
    std::size_t mother_length_for_tx(std::size_t tx_len) const;

    Bits expand_bits(const Bits& mother) const;
    // Sum the LLRs of repeated copies; punctured positions get 0.
    std::vector<double> collapse_llrs(const std::vector<double>& tx_llrs,
                                      std::size_t mother_len) const;
    // Per transmitted copy: mother a-posteriori minus the copy's own prior.
    std::vector<double> expand_extrinsic(const std::vector<double>& mother_app,
                                         const std::vector<double>& tx_priors) const;

    // Default-constructed adapter is the identity (mother rate 1/2).
    RateAdapter() : counts_{1, 1} {}

  private:
    int p_ = 1, q_ = 2;
    std::vector<int> counts_;
};

// Zero-terminated mother codeword: 2*(info_len + memory) bits.
Bits encode_mother(const RscCode& code, const Bits& info);

// Mother encoding followed by the rate adapter.
Bits encode(const RscCode& code, const RateAdapter& adapter, const Bits& info);

enum class BcjrMode { full, maxlog };

struct BcjrResult {
    std::vector<double> extrinsic;  // transmitted-domain coded-bit extrinsic LLRs
    std::vector<double> info_app;   // a-posteriori info-bit LLRs (tail excluded)
};

// prior_llrs live in the transmitted domain (detector extrinsic); punctured
// positions are internally treated as erasures.
BcjrResult bcjr_decode(const RscCode& code, const RateAdapter& adapter,
                       const std::vector<double>& prior_llrs, BcjrMode mode);

}  // namespace nbdet
