#pragma once

// Deterministic input generators shared by the property tests. Every test
// constructs its own Rng with an explicit seed so failures replay exactly.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "nbdet/constellation.hpp"
#include "nbdet/rsc.hpp"

namespace testutil {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }

    std::uint64_t integer(std::uint64_t bound) {  // [0, bound)
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(eng_);
    }

    // A-priori LLRs: mostly moderate, occasionally near-saturated so the
    // degenerate corners get exercised too.
    double prior_llr() {
        if (integer(10) == 0) return uniform(-40.0, 40.0);
        return uniform(-8.0, 8.0);
    }

    std::vector<double> prior_llrs(int n) {
        std::vector<double> v(n);
        for (auto& x : v) x = prior_llr();
        return v;
    }

    std::complex<double> observation(double radius = 2.0) {
        return {uniform(-radius, radius), uniform(-radius, radius)};
    }

    double sigma2(double lo = 0.02, double hi = 2.0) {  // log-uniform
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    nbdet::Bits bits(std::size_t n) {
        nbdet::Bits b(n);
        for (auto& x : b) x = static_cast<std::uint8_t>(integer(2));
        return b;
    }

    // Noisy channel LLRs around a transmitted codeword (positive mean for
    // bit 0), with the given reliability scale.
    std::vector<double> noisy_llrs(const nbdet::Bits& tx, double mean, double stddev) {
        std::normal_distribution<double> noise(0.0, stddev);
        std::vector<double> out(tx.size());
        for (std::size_t i = 0; i < tx.size(); ++i) {
            out[i] = (tx[i] ? -mean : mean) + noise(eng_);
        }
        return out;
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace testutil
