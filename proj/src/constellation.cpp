#include "nbdet/constellation.hpp"

#include <cmath>
#include <stdexcept>

namespace nbdet {

namespace {

// Two chip sums are the same point iff they differ by < 1e-9 per coordinate.
constexpr double kPointTol = 1e-9;

std::uint64_t quantize_key(const cplx& v) {
    const auto qr = static_cast<std::int64_t>(std::llround(v.real() / kPointTol));
    const auto qi = static_cast<std::int64_t>(std::llround(v.imag() / kPointTol));
    return static_cast<std::uint64_t>(qr) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(qi);
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / (i + 1);
    return r;
}

constexpr int kMapperTableMaxBits = 16;

}  // namespace

Constellation Constellation::build_dsm_epa(int n_bits) {
    if (n_bits < 2 || n_bits % 2 != 0) {
        throw std::invalid_argument("build_dsm_epa: n_bits must be even and >= 2");
    }
    Constellation c;
    c.n_bits_ = n_bits;
    const int half = n_bits / 2;
    const double amp = 1.0 / std::sqrt(static_cast<double>(n_bits));

    c.layers_.emplace();
    c.layers_->reserve(n_bits);
    for (int i = 0; i < half; ++i) c.layers_->push_back(cplx(amp, 0.0));
    for (int i = 0; i < half; ++i) c.layers_->push_back(cplx(0.0, amp));

    // Point (k,l): k positive real chips, l positive imaginary chips.
    c.points_.reserve(static_cast<std::size_t>(half + 1) * (half + 1));
    for (int k = 0; k <= half; ++k) {
        for (int l = 0; l <= half; ++l) {
            ConstellationPoint p;
            p.value = cplx((2 * k - half) * amp, (2 * l - half) * amp);
            p.index = k * (half + 1) + l;
            p.multiplicity = binomial(half, k) * binomial(half, l);
            c.points_.push_back(p);
        }
    }
    c.build_value_lookup();

    // Subsets: forcing a real-layer bit to b pins one real chip's sign, so
    // point (k,l) is reachable iff the other half-1 real chips can supply the
    // remaining positive count; imaginary layers are symmetric.
    c.subsets_.assign(static_cast<std::size_t>(2) * n_bits, {});
    for (int n = 0; n < n_bits; ++n) {
        const bool real_layer = n < half;
        for (int b = 0; b < 2; ++b) {
            auto& sub = c.subsets_[2 * n + b];
            for (const auto& p : c.points_) {
                const int k = p.index / (half + 1);
                const int l = p.index % (half + 1);
                const int pinned = real_layer ? k : l;
                // b = 0 contributes a positive chip, b = 1 a negative one.
                const int need = pinned - (b == 0 ? 1 : 0);
                if (need >= 0 && need <= half - 1) sub.push_back(p.index);
            }
        }
    }

    if (n_bits <= kMapperTableMaxBits) {
        c.mapper_table_.resize(std::size_t{1} << n_bits);
        for (std::uint32_t p = 0; p < (std::uint32_t{1} << n_bits); ++p) {
            int k = 0, l = 0;
            for (int i = 0; i < half; ++i) k += ((p >> i) & 1u) ? 0 : 1;
            for (int i = half; i < n_bits; ++i) l += ((p >> i) & 1u) ? 0 : 1;
            c.mapper_table_[p] = static_cast<std::int32_t>(k * (half + 1) + l);
        }
    }
    c.finalize_kind();
    return c;
}

Constellation Constellation::build_bijective(Scheme scheme) {
    Constellation c;
    switch (scheme) {
        case Scheme::bpsk: {
            c.n_bits_ = 1;
            c.points_ = {{cplx(1.0, 0.0), 0, 1}, {cplx(-1.0, 0.0), 1, 1}};
            c.mapper_table_ = {0, 1};
            break;
        }
        case Scheme::qpsk: {
            c.n_bits_ = 2;
            const double a = 1.0 / std::sqrt(2.0);
            // bit 0 -> real sign, bit 1 -> imaginary sign (Gray by construction)
            c.mapper_table_.resize(4);
            for (std::uint32_t p = 0; p < 4; ++p) {
                const double re = (p & 1u) ? -a : a;
                const double im = (p & 2u) ? -a : a;
                c.points_.push_back({cplx(re, im), static_cast<int>(p), 1});
                c.mapper_table_[p] = static_cast<std::int32_t>(p);
            }
            break;
        }
        case Scheme::psk8: {
            c.n_bits_ = 3;
            c.mapper_table_.resize(8);
            c.points_.resize(8);
            for (std::uint32_t k = 0; k < 8; ++k) {
                const std::uint32_t gray = k ^ (k >> 1);
                const double phi = 2.0 * M_PI * k / 8.0;
                c.points_[k] = {cplx(std::cos(phi), std::sin(phi)), static_cast<int>(k), 1};
                c.mapper_table_[gray] = static_cast<std::int32_t>(k);
            }
            break;
        }
        case Scheme::qam16_gray: {
            c.n_bits_ = 4;
            const double s = 1.0 / std::sqrt(10.0);
            // Per-axis Gray labeling over levels {-3,-1,+1,+3}:
            // bits (b0,b1) -> real level, (b2,b3) -> imaginary level.
            const double level[4] = {3.0, 1.0, -3.0, -1.0};  // index = b_lo | b_hi<<1
            c.mapper_table_.resize(16);
            for (std::uint32_t p = 0; p < 16; ++p) {
                const double re = level[p & 3u] * s;
                const double im = level[(p >> 2) & 3u] * s;
                c.points_.push_back({cplx(re, im), static_cast<int>(p), 1});
                c.mapper_table_[p] = static_cast<std::int32_t>(p);
            }
            break;
        }
    }
    c.build_value_lookup();
    c.build_subsets_from_mapper();
    c.finalize_kind();
    return c;
}

Constellation Constellation::from_parts(int n_bits, std::vector<cplx> point_values,
                                        std::optional<std::vector<cplx>> layers,
                                        const std::vector<std::int32_t>* mapper_table) {
    if (layers.has_value()) {
        // Layered constellations are rebuilt from first principles so all
        // derived structure (multiplicities, subsets) is consistent. Only the
        // equal-power split supported by build_dsm_epa is accepted.
        if (static_cast<int>(layers->size()) != n_bits) {
            throw std::invalid_argument("from_parts: layer count must equal n_bits");
        }
        Constellation rebuilt = build_dsm_epa(n_bits);
        const auto& want = *rebuilt.layers();
        for (int i = 0; i < n_bits; ++i) {
            if (std::abs((*layers)[i] - want[i]) > kPointTol) {
                throw std::invalid_argument("from_parts: unsupported layer amplitudes");
            }
        }
        if (rebuilt.size() != static_cast<int>(point_values.size())) {
            throw std::invalid_argument("from_parts: point list inconsistent with layers");
        }
        return rebuilt;
    }
    if (mapper_table == nullptr ||
        mapper_table->size() != (std::size_t{1} << n_bits)) {
        throw std::invalid_argument("from_parts: table constellation needs a 2^N mapper");
    }
    Constellation c;
    c.n_bits_ = n_bits;
    c.mapper_table_ = *mapper_table;
    c.points_.resize(point_values.size());
    for (std::size_t i = 0; i < point_values.size(); ++i) {
        c.points_[i] = {point_values[i], static_cast<int>(i), 0};
    }
    for (auto idx : c.mapper_table_) {
        if (idx < 0 || idx >= c.size()) throw std::invalid_argument("from_parts: mapper index out of range");
        c.points_[idx].multiplicity += 1;
    }
    for (const auto& p : c.points_) {
        if (p.multiplicity == 0) throw std::invalid_argument("from_parts: unreachable point");
    }
    c.build_value_lookup();
    c.build_subsets_from_mapper();
    c.finalize_kind();
    return c;
}

void Constellation::build_value_lookup() {
    value_index_.reserve(points_.size() * 2);
    for (const auto& p : points_) value_index_.emplace(quantize_key(p.value), p.index);
}

void Constellation::build_subsets_from_mapper() {
    subsets_.assign(static_cast<std::size_t>(2) * n_bits_, {});
    std::vector<std::uint8_t> seen(points_.size());
    for (int n = 0; n < n_bits_; ++n) {
        for (int b = 0; b < 2; ++b) {
            std::fill(seen.begin(), seen.end(), 0);
            auto& sub = subsets_[2 * n + b];
            for (std::uint32_t p = 0; p < mapper_table_.size(); ++p) {
                if (static_cast<int>((p >> n) & 1u) != b) continue;
                const int idx = mapper_table_[p];
                if (!seen[idx]) {
                    seen[idx] = 1;
                    sub.push_back(idx);
                }
            }
            std::sort(sub.begin(), sub.end());
        }
    }
}

void Constellation::finalize_kind() {
    kind_ = (static_cast<std::uint64_t>(size()) == (std::uint64_t{1} << n_bits_))
                ? ConstellationKind::bijective
                : ConstellationKind::non_bijective;
}

const std::vector<int>& Constellation::subset(int n, int b) const {
    if (n < 0 || n >= n_bits_ || b < 0 || b > 1) {
        throw std::invalid_argument("subset: bit index or value out of range");
    }
    return subsets_[2 * n + b];
}

const ConstellationPoint& Constellation::map_bits(const BitPattern& bits) const {
    if (static_cast<int>(bits.size()) != n_bits_) {
        throw std::invalid_argument("map_bits: pattern length mismatch");
    }
    for (auto b : bits) {
        if (b > 1) throw std::invalid_argument("map_bits: bits must be 0 or 1");
    }
    if (layers_.has_value()) {
        cplx sum(0.0, 0.0);
        for (int i = 0; i < n_bits_; ++i) sum += bits[i] ? -(*layers_)[i] : (*layers_)[i];
        // probe the quantization cell and its neighbours
        for (int dr = -1; dr <= 1; ++dr) {
            for (int di = -1; di <= 1; ++di) {
                const cplx probe = sum + cplx(dr * kPointTol, di * kPointTol);
                auto it = value_index_.find(quantize_key(probe));
                if (it != value_index_.end()) {
                    const cplx d = points_[it->second].value - sum;
                    if (std::abs(d.real()) < kPointTol && std::abs(d.imag()) < kPointTol) {
                        return points_[it->second];
                    }
                }
            }
        }
        throw std::logic_error("map_bits: chip sum missing from point set");
    }
    return points_[mapper_table_[pattern_to_uint(bits)]];
}

int Constellation::map_index(std::uint32_t pattern) const {
    if (!mapper_table_.empty()) return mapper_table_[pattern];
    return map_bits(uint_to_pattern(pattern, n_bits_)).index;
}

double Constellation::average_energy() const {
    double acc = 0.0;
    for (const auto& p : points_) acc += static_cast<double>(p.multiplicity) * std::norm(p.value);
    return acc / std::ldexp(1.0, n_bits_);
}

std::uint32_t Constellation::pattern_to_uint(const BitPattern& bits) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) v |= static_cast<std::uint32_t>(bits[i] & 1u) << i;
    return v;
}

BitPattern Constellation::uint_to_pattern(std::uint32_t value, int n_bits) {
    BitPattern bits(n_bits);
    for (int i = 0; i < n_bits; ++i) bits[i] = (value >> i) & 1u;
    return bits;
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::bpsk: return "bpsk";
        case Scheme::qpsk: return "qpsk";
        case Scheme::psk8: return "psk8";
        case Scheme::qam16_gray: return "qam16";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "bpsk") return Scheme::bpsk;
    if (name == "qpsk") return Scheme::qpsk;
    if (name == "psk8") return Scheme::psk8;
    if (name == "qam16" || name == "qam16_gray") return Scheme::qam16_gray;
    throw std::invalid_argument("unknown constellation scheme: " + name);
}

}  // namespace nbdet
