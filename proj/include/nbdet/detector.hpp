#pragma once

// Soft-input soft-output detection: extrinsic per-bit LLRs from one channel
// observation, a constellation, and per-bit a-priori LLRs.
//
// Four algorithms:
//   app           exact a-posteriori marginalization (bit- or symbol-domain,
//                 both give the same LLRs)
//   maxlog_bit    max-log over all 2^{N-1} excluded-bit patterns; the
//                 conventional detector, wrong for non-bijective mappings
//   maxlog_sym    max-log over the symbol subsets X_n^(b) with exact
//                 aggregated priors log P(z(x)); correct replacement for
//                 non-bijective mappings
//   maxlog_bitsym pattern-domain form with an inner max* grouping patterns
//                 by target symbol before the outer max; with an exact inner
//                 max* it reproduces maxlog_sym
//
// All outputs are extrinsic: the a-priori LLR of the bit under test never
// enters its own output. Outputs are clamped to +-kLlrClamp.

#include <cstdint>
#include <string>
#include <vector>

#include "nbdet/channel.hpp"
#include "nbdet/constellation.hpp"
#include "nbdet/maxstar.hpp"
#include "nbdet/prior.hpp"

namespace nbdet {

enum class DetectorAlgorithm { app, maxlog_bit, maxlog_sym, maxlog_bitsym };

using LlrVector = std::vector<double>;

struct DetectorMode {
    DetectorAlgorithm algorithm = DetectorAlgorithm::app;
    MaxstarImpl maxstar_impl = MaxstarImpl::exact;

    // app admits exact or table_lookup summation; maxlog_bit / maxlog_sym
    // are max-log by definition, so the (outer) impl must be approx_max.
    // maxlog_bitsym takes any impl for its inner grouping step.
    void validate() const;
};

struct DetectorDiag {
    std::uint64_t maxstar_calls = 0;  // pairwise log-domain combines
    std::uint64_t branch_count = 0;   // prior-aggregation tree/trellis edges
};

enum class LlrDomain { bit, symbol };

LlrVector app_llr(const Constellation& c, const BitPriorSet& priors, ChannelObservation y,
                  const AwgnChannel& ch, LlrDomain domain,
                  MaxstarImpl impl = MaxstarImpl::exact, DetectorDiag* diag = nullptr);

LlrVector maxlog_bit_llr(const Constellation& c, const BitPriorSet& priors, ChannelObservation y,
                         const AwgnChannel& ch, DetectorDiag* diag = nullptr);

LlrVector maxlog_sym_llr(const Constellation& c, const BitPriorSet& priors, ChannelObservation y,
                         const AwgnChannel& ch, DetectorDiag* diag = nullptr);

LlrVector maxlog_bitsym_llr(const Constellation& c, const BitPriorSet& priors,
                            ChannelObservation y, const AwgnChannel& ch, MaxstarImpl inner_impl,
                            DetectorDiag* diag = nullptr);

// Mode-based dispatch; app runs in the symbol domain (the cheaper of the two
// equivalent formulations).
LlrVector detect(const Constellation& c, const BitPriorSet& priors, ChannelObservation y,
                 const AwgnChannel& ch, const DetectorMode& mode, DetectorDiag* diag = nullptr);

std::string to_string(DetectorAlgorithm a);
DetectorAlgorithm algorithm_from_string(const std::string& name);
std::string to_string(MaxstarImpl impl);
MaxstarImpl maxstar_impl_from_string(const std::string& name);

}  // namespace nbdet
