#include "nbdet/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nbdet/maxstar.hpp"

namespace nbdet {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double clamp_llr(double llr) { return std::clamp(llr, -kLlrClamp, kLlrClamp); }

double log_p0_from_llr(double llr) {
    // log(1/(1+e^-L)), evaluated on the stable side
    if (llr >= 0.0) return -std::log1p(std::exp(-llr));
    return llr - std::log1p(std::exp(llr));
}

BitPriorSet BitPriorSet::uniform(int n_bits) {
    BitPriorSet s;
    s.log_p0_.assign(n_bits, -M_LN2);
    s.log_p1_.assign(n_bits, -M_LN2);
    return s;
}

BitPriorSet BitPriorSet::from_llrs(const std::vector<double>& llrs) {
    BitPriorSet s;
    s.log_p0_.reserve(llrs.size());
    s.log_p1_.reserve(llrs.size());
    for (double l : llrs) {
        const double lc = clamp_llr(l);
        s.log_p0_.push_back(log_p0_from_llr(lc));
        s.log_p1_.push_back(log_p0_from_llr(-lc));
    }
    return s;
}

BitPriorSet BitPriorSet::from_log_probs(std::vector<double> log_p0, std::vector<double> log_p1) {
    if (log_p0.size() != log_p1.size()) {
        throw std::invalid_argument("BitPriorSet: length mismatch");
    }
    for (std::size_t i = 0; i < log_p0.size(); ++i) {
        const double mass = std::exp(log_p0[i]) + std::exp(log_p1[i]);
        if (std::abs(mass - 1.0) > 1e-10) {
            throw std::invalid_argument("BitPriorSet: probabilities must sum to 1");
        }
    }
    BitPriorSet s;
    s.log_p0_ = std::move(log_p0);
    s.log_p1_ = std::move(log_p1);
    return s;
}

namespace {

// Direct walk of the binary tree over the N-1 bits excluding n. Each node
// extension is one branch; leaves accumulate into their target symbol via
// exact max*. Branch total: 2^N - 2.
struct NaiveWalker {
    const Constellation& c;
    const BitPriorSet& priors;
    int n;
    int b;
    std::vector<double>& bucket;          // per point index
    const std::vector<int>& bit_order;    // bits != n
    std::uint64_t branches = 0;

    void walk(std::uint32_t pattern, int depth, double log_prior) {
        if (depth == static_cast<int>(bit_order.size())) {
            const int idx = c.map_index(pattern);
            bucket[idx] = maxstar(bucket[idx], log_prior, MaxstarImpl::exact);
            return;
        }
        const int bit = bit_order[depth];
        for (int v = 0; v < 2; ++v) {
            ++branches;
            walk(pattern | (static_cast<std::uint32_t>(v) << bit), depth + 1,
                 log_prior + priors.log_p(bit, v));
        }
    }
};

PriorAggregate aggregate_naive(const Constellation& c, const BitPriorSet& priors, int n, int b) {
    std::vector<double> bucket(c.size(), kNegInf);
    std::vector<int> order;
    order.reserve(c.n_bits() - 1);
    for (int i = 0; i < c.n_bits(); ++i) {
        if (i != n) order.push_back(i);
    }
    NaiveWalker walker{c, priors, n, b, bucket, order};
    walker.walk(static_cast<std::uint32_t>(b) << n, 0, 0.0);

    const auto& sub = c.subset(n, b);
    PriorAggregate agg;
    agg.branch_count = walker.branches;
    agg.log_pz.reserve(sub.size());
    for (int idx : sub) agg.log_pz.push_back(bucket[idx]);
    return agg;
}

// Distribution over partial chip sums along one quadrature, kept as a flat
// vector sorted by coordinate. States within the identity tolerance merge;
// extending every state by one layer's two chip signs is the elementary
// branch operation. The distributions stay tiny (at most a handful of
// distinct sums), so sorted vectors beat node-based containers by a wide
// margin in the per-symbol hot path.
struct SumState {
    double value = 0.0;
    double log_p = 0.0;
};
using SumDist = std::vector<SumState>;

constexpr double kQuant = 1e-9;

void merge_into(SumDist& dist, double value, double log_p) {
    auto it = std::lower_bound(dist.begin(), dist.end(), value - kQuant,
                               [](const SumState& s, double v) { return s.value < v; });
    if (it != dist.end() && it->value - value < kQuant) {
        it->log_p = maxstar(it->log_p, log_p, MaxstarImpl::exact);
        return;
    }
    dist.insert(it, SumState{value, log_p});
}

void extend(SumDist& dist, SumDist& scratch, double chip_amp, double lp0, double lp1,
            std::uint64_t& branches) {
    scratch.clear();
    for (const SumState& st : dist) {
        ++branches;
        merge_into(scratch, st.value + chip_amp, st.log_p + lp0);
        ++branches;
        merge_into(scratch, st.value - chip_amp, st.log_p + lp1);
    }
    dist.swap(scratch);
}

// Convolve two partial-sum distributions (final assembly, not branches).
void convolve(const SumDist& a, const SumDist& f, SumDist& out) {
    out.clear();
    for (const SumState& sa : a) {
        for (const SumState& sb : f) {
            merge_into(out, sa.value + sb.value, sa.log_p + sb.log_p);
        }
    }
}

const SumState* find_near(const SumDist& dist, double value) {
    auto it = std::lower_bound(dist.begin(), dist.end(), value - kQuant,
                               [](const SumState& s, double v) { return s.value < v; });
    if (it != dist.end() && it->value - value < kQuant) return &*it;
    return nullptr;
}

void reset_to_zero_state(SumDist& dist) {
    dist.clear();
    dist.push_back(SumState{0.0, 0.0});
}

PriorAggregate aggregate_layered(const Constellation& c, const BitPriorSet& priors, int n, int b) {
    if (!c.layers().has_value()) {
        throw std::invalid_argument("aggregate_log_priors: layered_dp needs a layered constellation");
    }
    const auto& layers = *c.layers();
    const int n_bits = c.n_bits();

    // Axis-aligned layers only; the quadratures then factor independently.
    std::vector<int> real_layers, imag_layers;
    for (int i = 0; i < n_bits; ++i) {
        const cplx a = layers[i];
        if (a.imag() == 0.0) {
            real_layers.push_back(i);
        } else if (a.real() == 0.0) {
            imag_layers.push_back(i);
        } else {
            throw std::invalid_argument("aggregate_log_priors: layers must be axis-aligned");
        }
    }
    const bool n_is_real = layers[n].imag() == 0.0;
    const auto& own = n_is_real ? real_layers : imag_layers;
    const auto& other = n_is_real ? imag_layers : real_layers;
    auto amp_of = [&](int i) {
        return layers[i].imag() == 0.0 ? layers[i].real() : layers[i].imag();
    };

    PriorAggregate agg;

    // Scratch distributions reused across calls; all state is reset below,
    // so the operation stays pure.
    struct Scratch {
        SumDist fwd, bwd, own_dist, other_dist, tmp;
    };
    thread_local Scratch sc;

    // Quadrature containing bit n: forward over layers before n, backward
    // over layers after n, then combine; layer n itself is excluded.
    reset_to_zero_state(sc.fwd);
    reset_to_zero_state(sc.bwd);
    for (int i : own) {
        if (i < n)
            extend(sc.fwd, sc.tmp, amp_of(i), priors.log_p(i, 0), priors.log_p(i, 1),
                   agg.branch_count);
    }
    for (auto it = own.rbegin(); it != own.rend(); ++it) {
        if (*it > n)
            extend(sc.bwd, sc.tmp, amp_of(*it), priors.log_p(*it, 0), priors.log_p(*it, 1),
                   agg.branch_count);
    }
    convolve(sc.fwd, sc.bwd, sc.own_dist);

    // Other quadrature: single forward pass over all its layers.
    reset_to_zero_state(sc.other_dist);
    for (int i : other) {
        extend(sc.other_dist, sc.tmp, amp_of(i), priors.log_p(i, 0), priors.log_p(i, 1),
               agg.branch_count);
    }
    const SumDist& own_dist = sc.own_dist;
    const SumDist& other_dist = sc.other_dist;

    const double chip_n = (b == 0 ? 1.0 : -1.0) * (n_is_real ? layers[n].real() : layers[n].imag());
    const auto& sub = c.subset(n, b);
    agg.log_pz.reserve(sub.size());
    for (int idx : sub) {
        const cplx v = c.point(idx).value;
        const double own_coord = (n_is_real ? v.real() : v.imag()) - chip_n;
        const double other_coord = n_is_real ? v.imag() : v.real();
        const SumState* own_st = find_near(own_dist, own_coord);
        const SumState* other_st = find_near(other_dist, other_coord);
        if (own_st == nullptr || other_st == nullptr) {
            throw std::logic_error("aggregate_log_priors: subset point unreachable in DP");
        }
        agg.log_pz.push_back(own_st->log_p + other_st->log_p);
    }
    return agg;
}

}  // namespace

PriorAggregate aggregate_log_priors(const Constellation& c, const BitPriorSet& priors,
                                    int n, int b, AggregateMethod method) {
    if (priors.n_bits() != c.n_bits()) {
        throw std::invalid_argument("aggregate_log_priors: prior length mismatch");
    }
    if (n < 0 || n >= c.n_bits() || b < 0 || b > 1) {
        throw std::invalid_argument("aggregate_log_priors: bit index or value out of range");
    }
    return method == AggregateMethod::naive ? aggregate_naive(c, priors, n, b)
                                            : aggregate_layered(c, priors, n, b);
}

}  // namespace nbdet
