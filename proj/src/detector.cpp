#include "nbdet/detector.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbdet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> point_log_liks(const Constellation& c, ChannelObservation y,
                                   const AwgnChannel& ch) {
    std::vector<double> ll(static_cast<std::size_t>(c.size()));
    for (const auto& p : c.points()) ll[static_cast<std::size_t>(p.index)] = ch.log_likelihood(y, p.value);
    return ll;
}

// Visits all assignments of the bits m != n with bit n pinned to b, in
// ascending integer order of the full pattern (bit 0 varies fastest); folds
// that consume the leaves, like the grouped max* below, are order-sensitive,
// so this order is part of the detector's contract. leaf(pattern, log_prior)
// gets the full N-bit pattern integer and the prior mass of the free bits.
template <class F>
void walk_excluded(const Constellation& c, const BitPriorSet& priors, int n, int b, F&& leaf) {
    const int nb = c.n_bits();
    std::uint32_t pattern = b ? (1u << n) : 0u;
    auto rec = [&](auto&& self, int m, double logp) -> void {
        if (m < 0) {
            leaf(pattern, logp);
            return;
        }
        if (m == n) {
            self(self, m - 1, logp);
            return;
        }
        pattern &= ~(1u << m);
        self(self, m - 1, logp + priors.log_p(m, 0));
        pattern |= (1u << m);
        self(self, m - 1, logp + priors.log_p(m, 1));
        pattern &= ~(1u << m);
    };
    rec(rec, nb - 1, 0.0);
}

void check_dims(const Constellation& c, const BitPriorSet& priors) {
    if (priors.n_bits() != c.n_bits())
        throw std::invalid_argument("detector: prior size does not match constellation bit count");
}

double finish(double num0, double num1) { return clamp_llr(num0 - num1); }

}  // namespace

void DetectorMode::validate() const {
    switch (algorithm) {
        case DetectorAlgorithm::app:
            if (maxstar_impl == MaxstarImpl::approx_max)
                throw std::invalid_argument(
                    "DetectorMode: app requires exact or table_lookup summation");
            break;
        case DetectorAlgorithm::maxlog_bit:
        case DetectorAlgorithm::maxlog_sym:
            if (maxstar_impl != MaxstarImpl::approx_max)
                throw std::invalid_argument(
                    "DetectorMode: maxlog_bit/maxlog_sym are defined with approx_max");
            break;
        case DetectorAlgorithm::maxlog_bitsym:
            break;  // any inner impl
    }
}

LlrVector app_llr(const Constellation& c, const BitPriorSet& priors, ChannelObservation y,
                  const AwgnChannel& ch, LlrDomain domain, MaxstarImpl impl, DetectorDiag* diag) {
    check_dims(c, priors);
    if (impl == MaxstarImpl::approx_max)
        throw std::invalid_argument("app_llr: approx_max is not a summation");
    const int nb = c.n_bits();
    const auto loglik = point_log_liks(c, y, ch);
    LlrVector out(static_cast<std::size_t>(nb));

    if (domain == LlrDomain::bit) {
        std::vector<double> terms;
        terms.reserve(std::size_t{1} << (nb - 1));
        for (int n = 0; n < nb; ++n) {
            double num[2];
            for (int b = 0; b < 2; ++b) {
                terms.clear();
                walk_excluded(c, priors, n, b, [&](std::uint32_t pattern, double logp) {
                    terms.push_back(logp + loglik[static_cast<std::size_t>(c.map_index(pattern))]);
                });
                num[b] = maxstar_reduce(terms, impl);
                if (diag) diag->maxstar_calls += terms.size() - 1;
            }
            out[static_cast<std::size_t>(n)] = finish(num[0], num[1]);
        }
        return out;
    }

    const AggregateMethod method =
        c.layers() ? AggregateMethod::layered_dp : AggregateMethod::naive;
    std::vector<double> terms;
    for (int n = 0; n < nb; ++n) {
        double num[2];
        for (int b = 0; b < 2; ++b) {
            const PriorAggregate agg = aggregate_log_priors(c, priors, n, b, method);
            const auto& sub = c.subset(n, b);
            terms.resize(sub.size());
            for (std::size_t i = 0; i < sub.size(); ++i)
                terms[i] = agg.log_pz[i] + loglik[static_cast<std::size_t>(sub[i])];
            num[b] = maxstar_reduce(terms, impl);
            if (diag) {
                diag->branch_count += agg.branch_count;
                diag->maxstar_calls += terms.size() - 1;
            }
        }
        out[static_cast<std::size_t>(n)] = finish(num[0], num[1]);
    }
    return out;
}

LlrVector maxlog_bit_llr(const Constellation& c, const BitPriorSet& priors, ChannelObservation y,
                         const AwgnChannel& ch, DetectorDiag* diag) {
    check_dims(c, priors);
    const int nb = c.n_bits();
    const auto loglik = point_log_liks(c, y, ch);
    LlrVector out(static_cast<std::size_t>(nb));
    for (int n = 0; n < nb; ++n) {
        double num[2];
        for (int b = 0; b < 2; ++b) {
            double best = kNegInf;
            walk_excluded(c, priors, n, b, [&](std::uint32_t pattern, double logp) {
                const double t = logp + loglik[static_cast<std::size_t>(c.map_index(pattern))];
                if (t > best) best = t;
            });
            num[b] = best;
            if (diag) diag->maxstar_calls += (std::uint64_t{1} << (nb - 1)) - 1;
        }
        out[static_cast<std::size_t>(n)] = finish(num[0], num[1]);
    }
    return out;
}

LlrVector maxlog_sym_llr(const Constellation& c, const BitPriorSet& priors, ChannelObservation y,
                         const AwgnChannel& ch, DetectorDiag* diag) {
    check_dims(c, priors);
    const int nb = c.n_bits();
    const auto loglik = point_log_liks(c, y, ch);
    const AggregateMethod method =
        c.layers() ? AggregateMethod::layered_dp : AggregateMethod::naive;
    LlrVector out(static_cast<std::size_t>(nb));
    for (int n = 0; n < nb; ++n) {
        double num[2];
        for (int b = 0; b < 2; ++b) {
            const PriorAggregate agg = aggregate_log_priors(c, priors, n, b, method);
            const auto& sub = c.subset(n, b);
            double best = kNegInf;
            for (std::size_t i = 0; i < sub.size(); ++i) {
                const double t = agg.log_pz[i] + loglik[static_cast<std::size_t>(sub[i])];
                if (t > best) best = t;
            }
            num[b] = best;
            if (diag) {
                diag->branch_count += agg.branch_count;
                diag->maxstar_calls += sub.size() - 1;
            }
        }
        out[static_cast<std::size_t>(n)] = finish(num[0], num[1]);
    }
    return out;
}

LlrVector maxlog_bitsym_llr(const Constellation& c, const BitPriorSet& priors,
                            ChannelObservation y, const AwgnChannel& ch, MaxstarImpl inner_impl,
                            DetectorDiag* diag) {
    check_dims(c, priors);
    const int nb = c.n_bits();
    const auto loglik = point_log_liks(c, y, ch);
    LlrVector out(static_cast<std::size_t>(nb));
    std::vector<double> group(static_cast<std::size_t>(c.size()));
    for (int n = 0; n < nb; ++n) {
        double num[2];
        for (int b = 0; b < 2; ++b) {
            // Inner step: combine the log-priors of all patterns landing on
            // the same symbol with max*(inner_impl), in pattern order.
            std::fill(group.begin(), group.end(), kNegInf);
            walk_excluded(c, priors, n, b, [&](std::uint32_t pattern, double logp) {
                auto& g = group[static_cast<std::size_t>(c.map_index(pattern))];
                g = maxstar(g, logp, inner_impl);
                if (diag) ++diag->maxstar_calls;
            });
            // Outer step: plain max over the reachable symbols.
            double best = kNegInf;
            for (int idx : c.subset(n, b)) {
                const double t = group[static_cast<std::size_t>(idx)] + loglik[static_cast<std::size_t>(idx)];
                if (t > best) best = t;
            }
            num[b] = best;
        }
        out[static_cast<std::size_t>(n)] = finish(num[0], num[1]);
    }
    return out;
}

LlrVector detect(const Constellation& c, const BitPriorSet& priors, ChannelObservation y,
                 const AwgnChannel& ch, const DetectorMode& mode, DetectorDiag* diag) {
    mode.validate();
    switch (mode.algorithm) {
        case DetectorAlgorithm::app:
            return app_llr(c, priors, y, ch, LlrDomain::symbol, mode.maxstar_impl, diag);
        case DetectorAlgorithm::maxlog_bit:
            return maxlog_bit_llr(c, priors, y, ch, diag);
        case DetectorAlgorithm::maxlog_sym:
            return maxlog_sym_llr(c, priors, y, ch, diag);
        case DetectorAlgorithm::maxlog_bitsym:
            return maxlog_bitsym_llr(c, priors, y, ch, mode.maxstar_impl, diag);
    }
    throw std::logic_error("detect: unreachable");
}

std::string to_string(DetectorAlgorithm a) {
    switch (a) {
        case DetectorAlgorithm::app: return "app";
        case DetectorAlgorithm::maxlog_bit: return "maxlog-bit";
        case DetectorAlgorithm::maxlog_sym: return "maxlog-sym";
        case DetectorAlgorithm::maxlog_bitsym: return "maxlog-bitsym";
    }
    return "?";
}

DetectorAlgorithm algorithm_from_string(const std::string& name) {
    if (name == "app") return DetectorAlgorithm::app;
    if (name == "maxlog-bit") return DetectorAlgorithm::maxlog_bit;
    if (name == "maxlog-sym") return DetectorAlgorithm::maxlog_sym;
    if (name == "maxlog-bitsym") return DetectorAlgorithm::maxlog_bitsym;
    throw std::invalid_argument("unknown detector algorithm: " + name);
}

std::string to_string(MaxstarImpl impl) {
    switch (impl) {
        case MaxstarImpl::exact: return "exact";
        case MaxstarImpl::approx_max: return "approx-max";
        case MaxstarImpl::table_lookup: return "table-lookup";
    }
    return "?";
}

MaxstarImpl maxstar_impl_from_string(const std::string& name) {
    if (name == "exact") return MaxstarImpl::exact;
    if (name == "approx-max") return MaxstarImpl::approx_max;
    if (name == "table-lookup") return MaxstarImpl::table_lookup;
    throw std::invalid_argument("unknown max* impl: " + name);
}

}  // namespace nbdet
