#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <set>
#include <vector>

#include "doctest.h"
#include "nbdet/constellation.hpp"
#include "nbdet/serialize.hpp"
#include "oracle.hpp"

using nbdet::Constellation;
using nbdet::Scheme;

namespace {

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("superposition alphabet size is N^2/4 + N + 1") {
    for (int n = 2; n <= 16; n += 2) {
        const auto c = Constellation::build_dsm_epa(n);
        CHECK(c.size() == n * n / 4 + n + 1);
        // One chip per axis (N = 2) still has 4 = 2^N distinct points; the
        // mapping only loses injectivity from two chips per axis on.
        CHECK(c.kind() == (n == 2 ? nbdet::ConstellationKind::bijective
                                  : nbdet::ConstellationKind::non_bijective));
    }
    CHECK(Constellation::build_dsm_epa(16).size() == 81);
}

TEST_CASE("dsm-epa:4 is the 3x3 lattice with binomial multiplicities") {
    const auto c = Constellation::build_dsm_epa(4);
    REQUIRE(c.size() == 9);
    std::set<std::pair<long long, long long>> seen;
    std::uint64_t total_mult = 0;
    for (const auto& p : c.points()) {
        const double re = p.value.real(), im = p.value.imag();
        // Chips are +-1/2, so sums per axis are in {-1, 0, +1}.
        CHECK(std::abs(re - std::round(re)) < 1e-12);
        CHECK(std::abs(im - std::round(im)) < 1e-12);
        seen.insert({std::llround(re), std::llround(im)});
        const auto mult_axis = [](double v) { return std::llround(v) == 0 ? 2u : 1u; };
        CHECK(p.multiplicity == mult_axis(re) * mult_axis(im));
        total_mult += p.multiplicity;
    }
    CHECK(seen.size() == 9);
    CHECK(total_mult == 16);
}

TEST_CASE("superposition multiplicities follow the per-axis binomial law") {
    for (int n : {2, 4, 6, 8}) {
        const auto c = Constellation::build_dsm_epa(n);
        const double amp = 1.0 / std::sqrt(static_cast<double>(n));
        const int half = n / 2;
        for (const auto& p : c.points()) {
            // k minus-chips on an axis shift the sum from half*amp by -2k*amp.
            const int k_re = static_cast<int>(std::llround((half * amp - p.value.real()) / (2 * amp)));
            const int k_im = static_cast<int>(std::llround((half * amp - p.value.imag()) / (2 * amp)));
            CHECK(p.multiplicity == binom(half, k_re) * binom(half, k_im));
        }
    }
}

TEST_CASE("superposition mapping matches the first-principles chip sum") {
    for (int n : {2, 4, 6}) {
        const auto c = Constellation::build_dsm_epa(n);
        const auto pm = oracle::PatternMap::dsm_epa(n);
        for (std::uint32_t p = 0; p < (1u << n); ++p) {
            const auto x = c.point(c.map_index(p)).value;
            CHECK(std::abs(x.real() - static_cast<double>(pm.point[p].real())) < 1e-12);
            CHECK(std::abs(x.imag() - static_cast<double>(pm.point[p].imag())) < 1e-12);
        }
    }
}

TEST_CASE("subsets enumerate exactly the reachable points per (n, b)") {
    for (const auto& c : {Constellation::build_dsm_epa(6), Constellation::build_bijective(Scheme::qam16_gray)}) {
        const int nb = c.n_bits();
        for (int n = 0; n < nb; ++n) {
            for (int b = 0; b < 2; ++b) {
                std::set<int> reachable;
                for (std::uint32_t p = 0; p < (1u << nb); ++p) {
                    if (static_cast<int>((p >> n) & 1u) == b) reachable.insert(c.map_index(p));
                }
                const auto& subset = c.subset(n, b);
                CHECK(std::set<int>(subset.begin(), subset.end()) == reachable);
            }
        }
    }
}

TEST_CASE("bijective subsets partition the alphabet; superposition subsets overlap") {
    const auto q = Constellation::build_bijective(Scheme::qam16_gray);
    for (int n = 0; n < q.n_bits(); ++n) {
        const auto& s0 = q.subset(n, 0);
        const auto& s1 = q.subset(n, 1);
        CHECK(s0.size() + s1.size() == static_cast<std::size_t>(q.size()));
        std::set<int> all(s0.begin(), s0.end());
        all.insert(s1.begin(), s1.end());
        CHECK(all.size() == static_cast<std::size_t>(q.size()));
    }

    const auto d = Constellation::build_dsm_epa(4);
    const auto& s0 = d.subset(0, 0);
    const auto& s1 = d.subset(0, 1);
    std::set<int> i0(s0.begin(), s0.end());
    bool overlap = false;
    for (int idx : s1) overlap |= (i0.count(idx) != 0);
    CHECK(overlap);
}

TEST_CASE("all alphabets have unit average energy") {
    for (int n : {2, 4, 8, 16}) {
        CHECK(Constellation::build_dsm_epa(n).average_energy() == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (auto s : {Scheme::bpsk, Scheme::qpsk, Scheme::psk8, Scheme::qam16_gray}) {
        CHECK(Constellation::build_bijective(s).average_energy() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("reference alphabets: structure and Gray adjacency") {
    const auto b = Constellation::build_bijective(Scheme::bpsk);
    REQUIRE(b.size() == 2);
    CHECK(b.point(b.map_index(0)).value == std::complex<double>(1.0, 0.0));
    CHECK(b.point(b.map_index(1)).value == std::complex<double>(-1.0, 0.0));

    for (auto s : {Scheme::qpsk, Scheme::psk8, Scheme::qam16_gray}) {
        const auto c = Constellation::build_bijective(s);
        CHECK(c.size() == (1 << c.n_bits()));
        CHECK(c.kind() == nbdet::ConstellationKind::bijective);
        for (const auto& p : c.points()) CHECK(p.multiplicity == 1);

        // Gray labeling: nearest-neighbor points differ in exactly one bit.
        double dmin = 1e9;
        for (int i = 0; i < c.size(); ++i) {
            for (int j = i + 1; j < c.size(); ++j) {
                dmin = std::min(dmin, std::abs(c.point(i).value - c.point(j).value));
            }
        }
        std::vector<std::uint32_t> label_of(c.size());
        for (std::uint32_t p = 0; p < (1u << c.n_bits()); ++p) label_of[c.map_index(p)] = p;
        for (int i = 0; i < c.size(); ++i) {
            for (int j = i + 1; j < c.size(); ++j) {
                if (std::abs(c.point(i).value - c.point(j).value) < dmin * 1.01) {
                    CHECK(std::popcount(label_of[i] ^ label_of[j]) == 1);
                }
            }
        }
    }
}

TEST_CASE("pattern/uint conversions round trip") {
    for (std::uint32_t p : {0u, 1u, 9u, 14u, 15u}) {
        const auto bits = Constellation::uint_to_pattern(p, 4);
        CHECK(Constellation::pattern_to_uint(bits) == p);
    }
}

TEST_CASE("serialization round trip preserves points, mapping, and subsets") {
    for (const auto& c : {Constellation::build_dsm_epa(6), Constellation::build_bijective(Scheme::qam16_gray),
                          Constellation::build_bijective(Scheme::psk8)}) {
        const auto r = nbdet::constellation_from_json(nbdet::constellation_to_json(c));
        REQUIRE(r.size() == c.size());
        REQUIRE(r.n_bits() == c.n_bits());
        CHECK(r.kind() == c.kind());
        for (int i = 0; i < c.size(); ++i) {
            CHECK(r.point(i).value == c.point(i).value);
            CHECK(r.point(i).multiplicity == c.point(i).multiplicity);
        }
        for (std::uint32_t p = 0; p < (1u << c.n_bits()); ++p) {
            CHECK(r.map_index(p) == c.map_index(p));
        }
        for (int n = 0; n < c.n_bits(); ++n) {
            for (int b = 0; b < 2; ++b) CHECK(r.subset(n, b) == c.subset(n, b));
        }
    }
}

TEST_CASE("deserialization rejects malformed input") {
    CHECK_THROWS(nbdet::constellation_from_json(R"({"format":"something-else","version":1})"));
    CHECK_THROWS(nbdet::constellation_from_json(R"({"format":"nbdet-constellation","version":99})"));
    CHECK_THROWS(nbdet::constellation_from_json("plain text"));
}

TEST_CASE("save/load round trips through a file") {
    const auto c = Constellation::build_dsm_epa(4);
    const std::string path = "constellation_roundtrip.json";
    nbdet::save_constellation(c, path);
    const auto r = nbdet::load_constellation(path);
    CHECK(r.size() == c.size());
    for (int i = 0; i < c.size(); ++i) CHECK(r.point(i).value == c.point(i).value);
    std::remove(path.c_str());
}

TEST_CASE("build_dsm_epa validates its argument") {
    CHECK_THROWS(Constellation::build_dsm_epa(0));
    CHECK_THROWS(Constellation::build_dsm_epa(3));
    CHECK_THROWS(Constellation::build_dsm_epa(-2));
}
