#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "nbdet/channel.hpp"
#include "nbdet/detector.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using namespace nbdet;

namespace {

oracle::PatternMap pattern_map_for(const Constellation& c, bool superposition) {
    return superposition ? oracle::PatternMap::dsm_epa(c.n_bits())
                         : oracle::PatternMap::from_constellation(c);
}

struct Trial {
    BitPriorSet priors;
    std::vector<double> prior_llrs;
    ChannelObservation y;
    double sigma2;
};

Trial random_trial(testutil::Rng& rng, int n_bits) {
    Trial t{BitPriorSet::uniform(n_bits), rng.prior_llrs(n_bits), rng.observation(), rng.sigma2()};
    t.priors = BitPriorSet::from_llrs(t.prior_llrs);
    return t;
}

}  // namespace

TEST_CASE("exact detection: bit and symbol domains coincide and match the oracle") {
    testutil::Rng rng(0xde7701);
    struct Case {
        Constellation c;
        bool superposition;
    };
    const Case cases[] = {{Constellation::build_bijective(Scheme::qpsk), false},
                          {Constellation::build_bijective(Scheme::qam16_gray), false},
                          {Constellation::build_dsm_epa(4), true},
                          {Constellation::build_dsm_epa(6), true}};
    for (const auto& [c, superposition] : cases) {
        const auto pm = pattern_map_for(c, superposition);
        for (int trial = 0; trial < 50; ++trial) {
            const auto t = random_trial(rng, c.n_bits());
            const AwgnChannel ch(t.sigma2, 1);
            const auto bit = app_llr(c, t.priors, t.y, ch, LlrDomain::bit);
            const auto sym = app_llr(c, t.priors, t.y, ch, LlrDomain::symbol);
            CHECK(testutil::max_abs_diff(bit, sym) < 1e-9);
            for (int n = 0; n < c.n_bits(); ++n) {
                const double want =
                    oracle::clamp50(oracle::app_llr(pm, t.prior_llrs, t.y, t.sigma2, n));
                CHECK(std::abs(sym[n] - want) < 1e-9);
            }
        }
    }
}

TEST_CASE("all four detectors match the straight-from-the-definitions oracle") {
    testutil::Rng rng(0xde7702);
    for (int n_bits : {4, 6}) {
        const auto c = Constellation::build_dsm_epa(n_bits);
        const auto pm = oracle::PatternMap::dsm_epa(n_bits);
        for (int trial = 0; trial < 40; ++trial) {
            const auto t = random_trial(rng, n_bits);
            const AwgnChannel ch(t.sigma2, 1);
            const auto app = app_llr(c, t.priors, t.y, ch, LlrDomain::symbol);
            const auto mlb = maxlog_bit_llr(c, t.priors, t.y, ch);
            const auto mls = maxlog_sym_llr(c, t.priors, t.y, ch);
            for (int n = 0; n < n_bits; ++n) {
                CHECK(std::abs(app[n] -
                               oracle::clamp50(oracle::app_llr(pm, t.prior_llrs, t.y, t.sigma2, n))) <
                      1e-9);
                CHECK(std::abs(mlb[n] - oracle::clamp50(oracle::maxlog_bit_llr(
                                            pm, t.prior_llrs, t.y, t.sigma2, n))) < 1e-9);
                CHECK(std::abs(mls[n] - oracle::clamp50(oracle::maxlog_sym_llr(
                                            pm, t.prior_llrs, t.y, t.sigma2, n))) < 1e-9);
            }
            for (auto inner :
                 {MaxstarImpl::exact, MaxstarImpl::approx_max, MaxstarImpl::table_lookup}) {
                const auto mbs = maxlog_bitsym_llr(c, t.priors, t.y, ch, inner);
                for (int n = 0; n < n_bits; ++n) {
                    CHECK(std::abs(mbs[n] - oracle::clamp50(oracle::maxlog_bitsym_llr(
                                                pm, t.prior_llrs, t.y, t.sigma2, n, inner))) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("bijective alphabets collapse all max-log variants to one detector") {
    testutil::Rng rng(0xde7703);
    const Constellation cs[] = {Constellation::build_bijective(Scheme::bpsk),
                                Constellation::build_bijective(Scheme::qpsk),
                                Constellation::build_bijective(Scheme::psk8),
                                Constellation::build_bijective(Scheme::qam16_gray)};
    for (const auto& c : cs) {
        for (int trial = 0; trial < 30; ++trial) {
            const auto t = random_trial(rng, c.n_bits());
            const AwgnChannel ch(t.sigma2, 1);
            const auto mlb = maxlog_bit_llr(c, t.priors, t.y, ch);
            const auto mls = maxlog_sym_llr(c, t.priors, t.y, ch);
            CHECK(testutil::max_abs_diff(mlb, mls) < 1e-10);
            for (auto inner :
                 {MaxstarImpl::exact, MaxstarImpl::approx_max, MaxstarImpl::table_lookup}) {
                CHECK(testutil::max_abs_diff(maxlog_bitsym_llr(c, t.priors, t.y, ch, inner), mlb) <
                      1e-10);
            }
        }
    }
}

TEST_CASE("bridged detector with exact inner combine reproduces the symbol-domain max-log") {
    testutil::Rng rng(0xde7704);
    for (int n_bits : {4, 6}) {
        const auto c = Constellation::build_dsm_epa(n_bits);
        for (int trial = 0; trial < 50; ++trial) {
            const auto t = random_trial(rng, n_bits);
            const AwgnChannel ch(t.sigma2, 1);
            CHECK(testutil::max_abs_diff(maxlog_bitsym_llr(c, t.priors, t.y, ch, MaxstarImpl::exact),
                                         maxlog_sym_llr(c, t.priors, t.y, ch)) < 1e-10);
        }
    }
}

TEST_CASE("bridged detector with max inner combine degenerates to the bit-domain max-log") {
    testutil::Rng rng(0xde7705);
    for (int n_bits : {4, 6, 8}) {
        const auto c = Constellation::build_dsm_epa(n_bits);
        for (int trial = 0; trial < 20; ++trial) {
            const auto t = random_trial(rng, n_bits);
            const AwgnChannel ch(t.sigma2, 1);
            CHECK(testutil::max_abs_diff(
                      maxlog_bitsym_llr(c, t.priors, t.y, ch, MaxstarImpl::approx_max),
                      maxlog_bit_llr(c, t.priors, t.y, ch)) < 1e-12);
        }
    }
}

TEST_CASE("outputs are extrinsic: a bit's own prior never enters its LLR") {
    testutil::Rng rng(0xde7706);
    const auto c = Constellation::build_dsm_epa(6);
    for (int trial = 0; trial < 20; ++trial) {
        auto llrs = rng.prior_llrs(6);
        const auto t_y = rng.observation();
        const double s2 = rng.sigma2();
        const AwgnChannel ch(s2, 1);
        const int n = static_cast<int>(rng.integer(6));

        const auto base = BitPriorSet::from_llrs(llrs);
        llrs[n] = rng.uniform(-20.0, 20.0);  // perturb only bit n's prior
        const auto perturbed = BitPriorSet::from_llrs(llrs);

        const auto check_invariant = [&](auto&& detector) {
            const auto a = detector(base);
            const auto b = detector(perturbed);
            CHECK(std::abs(a[n] - b[n]) < 1e-12);
        };
        check_invariant([&](const BitPriorSet& p) { return app_llr(c, p, t_y, ch, LlrDomain::bit); });
        check_invariant(
            [&](const BitPriorSet& p) { return app_llr(c, p, t_y, ch, LlrDomain::symbol); });
        check_invariant([&](const BitPriorSet& p) { return maxlog_bit_llr(c, p, t_y, ch); });
        check_invariant([&](const BitPriorSet& p) { return maxlog_sym_llr(c, p, t_y, ch); });
        check_invariant([&](const BitPriorSet& p) {
            return maxlog_bitsym_llr(c, p, t_y, ch, MaxstarImpl::table_lookup);
        });
    }
}

TEST_CASE("negation symmetry under uniform priors: L(-y) = -L(y)") {
    testutil::Rng rng(0xde7707);
    for (int n_bits : {4, 6}) {
        const auto c = Constellation::build_dsm_epa(n_bits);
        const auto priors = BitPriorSet::uniform(n_bits);
        for (int trial = 0; trial < 20; ++trial) {
            const auto y = rng.observation();
            const AwgnChannel ch(rng.sigma2(), 1);
            const auto pos = app_llr(c, priors, y, ch, LlrDomain::symbol);
            const auto neg = app_llr(c, priors, -y, ch, LlrDomain::symbol);
            for (int n = 0; n < n_bits; ++n) CHECK(std::abs(pos[n] + neg[n]) < 1e-9);
        }
    }
}

TEST_CASE("sign consistency: observation pinned on a bit-0-only corner point") {
    const auto c = Constellation::build_dsm_epa(4);
    const auto priors = BitPriorSet::uniform(4);
    // Pattern 0000 maps to (1+1j), reachable only with bit 0 = 0.
    const ChannelObservation y{1.0, 1.0};
    const AwgnChannel ch(1e-3, 1);
    CHECK(app_llr(c, priors, y, ch, LlrDomain::symbol)[0] > 0.0);
    CHECK(app_llr(c, priors, y, ch, LlrDomain::bit)[0] > 0.0);
    CHECK(maxlog_bit_llr(c, priors, y, ch)[0] > 0.0);
    CHECK(maxlog_sym_llr(c, priors, y, ch)[0] > 0.0);
    CHECK(maxlog_bitsym_llr(c, priors, y, ch, MaxstarImpl::exact)[0] > 0.0);
}

TEST_CASE("near-certain priors on the other bits make max-log exact") {
    testutil::Rng rng(0xde7708);
    const auto c = Constellation::build_dsm_epa(4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> llrs(4);
        for (auto& v : llrs) v = rng.integer(2) ? 50.0 : -50.0;
        const auto priors = BitPriorSet::from_llrs(llrs);
        // Keep the observation mild: with |y| <= 1 and sigma^2 = 1 the
        // likelihood spread across the alphabet stays below ~9 nats, so the
        // 50-nat prior penalty leaves one dominating term per hypothesis and
        // the max equals the sum to well under the tolerance.
        const auto y = rng.observation(1.0);
        const AwgnChannel ch(1.0, 1);
        CHECK(testutil::max_abs_diff(maxlog_sym_llr(c, priors, y, ch),
                                     app_llr(c, priors, y, ch, LlrDomain::symbol)) < 1e-9);
    }
}

TEST_CASE("bpsk without priors is the analytic 4 Re{y} / sigma^2 for every algorithm") {
    testutil::Rng rng(0xde7709);
    const auto c = Constellation::build_bijective(Scheme::bpsk);
    const auto priors = BitPriorSet::uniform(1);
    for (int trial = 0; trial < 25; ++trial) {
        const ChannelObservation y{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        const double s2 = rng.sigma2(0.1, 2.0);
        const AwgnChannel ch(s2, 1);
        const double want = clamp_llr(4.0 * y.real() / s2);
        CHECK(app_llr(c, priors, y, ch, LlrDomain::bit)[0] == doctest::Approx(want).epsilon(1e-9));
        CHECK(maxlog_bit_llr(c, priors, y, ch)[0] == doctest::Approx(want).epsilon(1e-9));
        CHECK(maxlog_sym_llr(c, priors, y, ch)[0] == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("outputs are clamped to +-50") {
    const auto c = Constellation::build_dsm_epa(4);
    const auto priors = BitPriorSet::uniform(4);
    const AwgnChannel ch(1e-4, 1);
    const auto l = app_llr(c, priors, {1.0, 1.0}, ch, LlrDomain::symbol);
    for (double v : l) {
        CHECK(std::abs(v) <= 50.0);
        CHECK(std::isfinite(v));
    }
    CHECK(l[0] == 50.0);
}

TEST_CASE("two-chips-per-axis superposition: bit- and symbol-domain max-log coincide") {
    // With only two chips per quadrature, conditioning on one bit leaves a
    // single free chip on its axis (every reachable value has exactly one
    // pattern), and the other axis contributes identically to both
    // hypotheses. The two max-log detectors are therefore the same function
    // on this alphabet; they separate only from three chips per axis up.
    testutil::Rng rng(0xde770a);
    const auto c = Constellation::build_dsm_epa(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = random_trial(rng, 4);
        const AwgnChannel ch(t.sigma2, 1);
        CHECK(testutil::max_abs_diff(maxlog_bit_llr(c, t.priors, t.y, ch),
                                     maxlog_sym_llr(c, t.priors, t.y, ch)) < 1e-12);
    }
}

TEST_CASE("mode validation rejects contradictory algorithm/impl combinations") {
    DetectorMode m;
    m.algorithm = DetectorAlgorithm::app;
    m.maxstar_impl = MaxstarImpl::approx_max;
    CHECK_THROWS(m.validate());
    m.algorithm = DetectorAlgorithm::maxlog_bit;
    m.maxstar_impl = MaxstarImpl::exact;
    CHECK_THROWS(m.validate());
    m.algorithm = DetectorAlgorithm::maxlog_sym;
    m.maxstar_impl = MaxstarImpl::table_lookup;
    CHECK_THROWS(m.validate());
    m.algorithm = DetectorAlgorithm::maxlog_sym;
    m.maxstar_impl = MaxstarImpl::approx_max;
    CHECK_NOTHROW(m.validate());
    m.algorithm = DetectorAlgorithm::app;
    m.maxstar_impl = MaxstarImpl::table_lookup;
    CHECK_NOTHROW(m.validate());
}

TEST_CASE("detect() dispatch honors the mode and fills diagnostics") {
    testutil::Rng rng(0xde770b);
    const auto c = Constellation::build_dsm_epa(6);
    const auto t = random_trial(rng, 6);
    const AwgnChannel ch(t.sigma2, 1);

    DetectorDiag diag{};
    DetectorMode app_mode{DetectorAlgorithm::app, MaxstarImpl::exact};
    const auto a = detect(c, t.priors, t.y, ch, app_mode, &diag);
    CHECK(a == app_llr(c, t.priors, t.y, ch, LlrDomain::symbol));
    CHECK(diag.maxstar_calls > 0);
    CHECK(diag.branch_count > 0);

    DetectorMode mlb{DetectorAlgorithm::maxlog_bit, MaxstarImpl::approx_max};
    CHECK(detect(c, t.priors, t.y, ch, mlb) == maxlog_bit_llr(c, t.priors, t.y, ch));

    DetectorMode mbs{DetectorAlgorithm::maxlog_bitsym, MaxstarImpl::table_lookup};
    CHECK(detect(c, t.priors, t.y, ch, mbs) ==
          maxlog_bitsym_llr(c, t.priors, t.y, ch, MaxstarImpl::table_lookup));
}

TEST_CASE("algorithm and impl names round trip") {
    for (auto a : {DetectorAlgorithm::app, DetectorAlgorithm::maxlog_bit,
                   DetectorAlgorithm::maxlog_sym, DetectorAlgorithm::maxlog_bitsym}) {
        CHECK(algorithm_from_string(to_string(a)) == a);
    }
    for (auto i : {MaxstarImpl::exact, MaxstarImpl::approx_max, MaxstarImpl::table_lookup}) {
        CHECK(maxstar_impl_from_string(to_string(i)) == i);
    }
    CHECK_THROWS(algorithm_from_string("nonsense"));
    CHECK_THROWS(maxstar_impl_from_string("nonsense"));
}
