#include "nbdet/rsc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nbdet/maxstar.hpp"
#include "nbdet/prior.hpp"

namespace nbdet {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline int parity_of(unsigned x) { return std::popcount(x) & 1; }
}  // namespace

void RscCode::validate() const {
    if (memory < 1 || memory > 16) throw std::invalid_argument("RscCode: memory out of range");
    if ((feedback & 1u) == 0) throw std::invalid_argument("RscCode: feedback needs constant term");
    const unsigned limit = 2u << memory;
    if (feedback >= limit || feedforward >= limit)
        throw std::invalid_argument("RscCode: polynomial degree exceeds memory");
}

Trellis::Trellis(const RscCode& code) {
    code.validate();
    memory = code.memory;
    n_states = 1 << memory;
    const unsigned mask = static_cast<unsigned>(n_states - 1);
    parity.resize(static_cast<std::size_t>(n_states) * 2);
    next.resize(static_cast<std::size_t>(n_states) * 2);
    term_input.resize(static_cast<std::size_t>(n_states));
    for (int s = 0; s < n_states; ++s) {
        const int fb = parity_of((code.feedback >> 1) & static_cast<unsigned>(s));
        term_input[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(fb);
        for (int u = 0; u < 2; ++u) {
            const int a = u ^ fb;  // register input after feedback
            const int par = ((code.feedforward & 1u) ? a : 0) ^
                            parity_of((code.feedforward >> 1) & static_cast<unsigned>(s));
            const std::size_t i = static_cast<std::size_t>(2 * s + u);
            parity[i] = static_cast<std::uint8_t>(par);
            next[i] = static_cast<std::uint16_t>(((static_cast<unsigned>(s) << 1) & mask) |
                                                 static_cast<unsigned>(a));
        }
    }
}

RateAdapter RateAdapter::for_rate(int p, int q) {
    if (p < 1 || q <= p) throw std::invalid_argument("RateAdapter: rate must be in (0, 1)");
    const int g = std::gcd(p, q);
    p /= g;
    q /= g;
    RateAdapter a;
    a.p_ = p;
    a.q_ = q;
    a.counts_.assign(static_cast<std::size_t>(2 * p), 1);
    if (q > 2 * p) {
        // repetition: spread the q - 2p extra copies round-robin
        for (int e = 0; e < q - 2 * p; ++e) a.counts_[static_cast<std::size_t>(e % (2 * p))] += 1;
    } else if (q < 2 * p) {
        // puncturing: keep all p systematic bits, spread the q - p surviving
        // parities evenly over the period
        const int keep = q - p;
        for (int k = 0; k < p; ++k) {
            const int kept = (k + 1) * keep / p - k * keep / p;
            a.counts_[static_cast<std::size_t>(2 * k + 1)] = kept;
        }
    }
    return a;
}

std::size_t RateAdapter::tx_length(std::size_t mother_len) const {
    const std::size_t period = counts_.size();
    const std::size_t per_period =
        static_cast<std::size_t>(std::accumulate(counts_.begin(), counts_.end(), 0));
    std::size_t len = (mother_len / period) * per_period;
    for (std::size_t j = 0; j < mother_len % period; ++j)
        len += static_cast<std::size_t>(counts_[j]);
    return len;
}

std::size_t RateAdapter::mother_length_for_tx(std::size_t tx_len) const {
    // systematic positions always transmit, so tx_length is strictly
    // increasing over even mother lengths; start at the whole-period floor
    const std::size_t period = counts_.size();
    const std::size_t per_period = static_cast<std::size_t>(q_);
    for (std::size_t m = (tx_len / per_period) * period;; m += 2) {
        const std::size_t t = tx_length(m);
        if (t == tx_len && m >= 2) return m;
        if (t > tx_len) throw std::invalid_argument("RateAdapter: no mother length matches");
    }
}

Bits RateAdapter::expand_bits(const Bits& mother) const {
    Bits out;
    out.reserve(tx_length(mother.size()));
    for (std::size_t j = 0; j < mother.size(); ++j) {
        for (int r = 0; r < counts_[j % counts_.size()]; ++r) out.push_back(mother[j]);
    }
    return out;
}

std::vector<double> RateAdapter::collapse_llrs(const std::vector<double>& tx_llrs,
                                               std::size_t mother_len) const {
    if (tx_llrs.size() != tx_length(mother_len))
        throw std::invalid_argument("RateAdapter: transmitted length mismatch");
    std::vector<double> mother(mother_len, 0.0);
    std::size_t t = 0;
    for (std::size_t j = 0; j < mother_len; ++j) {
        for (int r = 0; r < counts_[j % counts_.size()]; ++r) mother[j] += tx_llrs[t++];
    }
    return mother;
}

std::vector<double> RateAdapter::expand_extrinsic(const std::vector<double>& mother_app,
                                                  const std::vector<double>& tx_priors) const {
    if (tx_priors.size() != tx_length(mother_app.size()))
        throw std::invalid_argument("RateAdapter: transmitted length mismatch");
    std::vector<double> out(tx_priors.size());
    std::size_t t = 0;
    for (std::size_t j = 0; j < mother_app.size(); ++j) {
        for (int r = 0; r < counts_[j % counts_.size()]; ++r, ++t)
            out[t] = mother_app[j] - tx_priors[t];
    }
    return out;
}

Bits encode_mother(const RscCode& code, const Bits& info) {
    if (info.empty()) throw std::invalid_argument("encode: empty info word");
    const Trellis tr(code);
    Bits out;
    out.reserve(2 * (info.size() + static_cast<std::size_t>(code.memory)));
    unsigned s = 0;
    auto step = [&](int u) {
        const std::size_t i = 2 * s + static_cast<unsigned>(u);
        out.push_back(static_cast<std::uint8_t>(u));
        out.push_back(tr.parity[i]);
        s = tr.next[i];
    };
    for (std::uint8_t u : info) step(u & 1);
    for (int k = 0; k < code.memory; ++k) step(tr.term_input[s]);
    return out;
}

Bits encode(const RscCode& code, const RateAdapter& adapter, const Bits& info) {
    return adapter.expand_bits(encode_mother(code, info));
}

BcjrResult bcjr_decode(const RscCode& code, const RateAdapter& adapter,
                       const std::vector<double>& prior_llrs, BcjrMode mode) {
    const Trellis tr(code);
    const std::size_t mother_len = adapter.mother_length_for_tx(prior_llrs.size());
    const std::size_t T = mother_len / 2;  // trellis steps incl. tail
    if (T <= static_cast<std::size_t>(code.memory))
        throw std::invalid_argument("bcjr_decode: block shorter than the tail");
    const std::size_t K = T - static_cast<std::size_t>(code.memory);
    const std::size_t S = static_cast<std::size_t>(tr.n_states);
    const MaxstarImpl impl =
        mode == BcjrMode::full ? MaxstarImpl::exact : MaxstarImpl::approx_max;

    const std::vector<double> mother_prior = adapter.collapse_llrs(prior_llrs, mother_len);
    // lp[2*pos + c] = log P(coded bit at pos equals c)
    std::vector<double> lp(2 * mother_len);
    for (std::size_t j = 0; j < mother_len; ++j) {
        lp[2 * j + 0] = log_p0_from_llr(mother_prior[j]);
        lp[2 * j + 1] = log_p0_from_llr(-mother_prior[j]);
    }
    auto gamma = [&](std::size_t t, std::size_t s, int u) {
        const std::size_t i = 2 * s + static_cast<std::size_t>(u);
        return lp[4 * t + static_cast<std::size_t>(u)] +
               lp[4 * t + 2 + static_cast<std::size_t>(tr.parity[i])];
    };

    std::vector<double> alpha((T + 1) * S, kNegInf);
    alpha[0] = 0.0;  // zero start state
    for (std::size_t t = 0; t < T; ++t) {
        double* cur = &alpha[t * S];
        double* nxt = &alpha[(t + 1) * S];
        for (std::size_t s = 0; s < S; ++s) {
            if (cur[s] == kNegInf) continue;
            for (int u = 0; u < 2; ++u) {
                const std::size_t ns = tr.next[2 * s + static_cast<std::size_t>(u)];
                nxt[ns] = maxstar(nxt[ns], cur[s] + gamma(t, s, u), impl);
            }
        }
        const double m = *std::max_element(nxt, nxt + S);
        for (std::size_t s = 0; s < S; ++s) nxt[s] -= m;
    }

    std::vector<double> beta((T + 1) * S, kNegInf);
    beta[T * S + 0] = 0.0;  // zero-terminated
    for (std::size_t t = T; t-- > 0;) {
        double* cur = &beta[t * S];
        const double* nxt = &beta[(t + 1) * S];
        for (std::size_t s = 0; s < S; ++s) {
            for (int u = 0; u < 2; ++u) {
                const std::size_t ns = tr.next[2 * s + static_cast<std::size_t>(u)];
                if (nxt[ns] == kNegInf) continue;
                cur[s] = maxstar(cur[s], gamma(t, s, u) + nxt[ns], impl);
            }
        }
        const double m = *std::max_element(cur, cur + S);
        if (m != kNegInf) {
            for (std::size_t s = 0; s < S; ++s) cur[s] -= m;
        }
    }

    std::vector<double> mother_app(mother_len);
    std::vector<double> info_app;
    info_app.reserve(K);
    for (std::size_t t = 0; t < T; ++t) {
        double acc_u[2] = {kNegInf, kNegInf};
        double acc_p[2] = {kNegInf, kNegInf};
        for (std::size_t s = 0; s < S; ++s) {
            if (alpha[t * S + s] == kNegInf) continue;
            for (int u = 0; u < 2; ++u) {
                const std::size_t i = 2 * s + static_cast<std::size_t>(u);
                const std::size_t ns = tr.next[i];
                const double b = beta[(t + 1) * S + ns];
                if (b == kNegInf) continue;
                const double m = alpha[t * S + s] + gamma(t, s, u) + b;
                acc_u[u] = maxstar(acc_u[u], m, impl);
                acc_p[tr.parity[i]] = maxstar(acc_p[tr.parity[i]], m, impl);
            }
        }
        mother_app[2 * t] = acc_u[0] - acc_u[1];
        mother_app[2 * t + 1] = acc_p[0] - acc_p[1];
        if (t < K) info_app.push_back(acc_u[0] - acc_u[1]);
    }

    BcjrResult res;
    res.info_app = std::move(info_app);
    res.extrinsic = adapter.expand_extrinsic(mother_app, prior_llrs);
    return res;
}

}  // namespace nbdet
