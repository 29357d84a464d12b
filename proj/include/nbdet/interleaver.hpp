#pragma once

// Seeded random bit interleaver for the iterative receiver. The permutation
// is drawn with a hand-rolled Fisher-Yates over mt19937_64 so the same seed
// gives the same permutation on every platform.

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace nbdet {

class Interleaver {
  public:
    static Interleaver random(std::size_t length, std::uint64_t seed) {
        Interleaver il;
        il.seed_ = seed;
        il.perm_.resize(length);
        std::iota(il.perm_.begin(), il.perm_.end(), 0u);
        std::mt19937_64 eng(seed);
        for (std::size_t i = length; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(eng() % i);
            std::swap(il.perm_[i - 1], il.perm_[j]);
        }
        return il;
    }

    static Interleaver identity(std::size_t length) {
        Interleaver il;
        il.perm_.resize(length);
        std::iota(il.perm_.begin(), il.perm_.end(), 0u);
        return il;
    }

    std::size_t size() const { return perm_.size(); }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::uint32_t>& permutation() const { return perm_; }

    // out[i] = in[perm[i]]
    template <class T>
    std::vector<T> interleave(const std::vector<T>& in) const {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[perm_[i]];
        return out;
    }

    // inverse: out[perm[i]] = in[i]
    template <class T>
    std::vector<T> deinterleave(const std::vector<T>& in) const {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[perm_[i]] = in[i];
        return out;
    }

  private:
    void check(std::size_t n) const {
        if (n != perm_.size()) throw std::invalid_argument("Interleaver: length mismatch");
    }

    std::vector<std::uint32_t> perm_;
    std::uint64_t seed_ = 0;
};

}  // namespace nbdet
