#pragma once

// Complex AWGN channel: y = x + w with w circularly symmetric, total
// variance sigma^2 (sigma^2/2 per component), matching the density
// p(y|x) = 1/(pi sigma^2) exp(-|y-x|^2 / sigma^2).
//
// SNR convention: SNR = Es / sigma^2 with unit symbol energy.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "nbdet/rng.hpp"

namespace nbdet {

using ChannelObservation = std::complex<double>;

inline double snr_db_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }
inline double sigma2_to_snr_db(double sigma2) { return -10.0 * std::log10(sigma2); }

class AwgnChannel {
  public:
    AwgnChannel(double sigma2, std::uint64_t seed)
        : sigma2_(sigma2), seed_(seed), eng_(seed) {
        if (!(sigma2 > 0.0)) throw std::invalid_argument("AwgnChannel: sigma2 must be > 0");
    }

    double sigma2() const { return sigma2_; }
    std::uint64_t seed() const { return seed_; }

    ChannelObservation transmit(std::complex<double> x) {
        const auto [g0, g1] = gaussian_pair(eng_);
        const double s = std::sqrt(sigma2_ / 2.0);
        return x + std::complex<double>(s * g0, s * g1);
    }

    // log p(y|x) = -log(pi sigma^2) - |y-x|^2 / sigma^2
    double log_likelihood(ChannelObservation y, std::complex<double> x) const {
        return -std::log(M_PI * sigma2_) - std::norm(y - x) / sigma2_;
    }

  private:
    double sigma2_;
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

}  // namespace nbdet
