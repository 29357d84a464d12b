#pragma once

// Symbol constellations, bijective and non-bijective. A constellation keeps
// the full bit-pattern-to-symbol structure: per-point multiplicities and the
// per-bit subsets X_n^(b) of points reachable with bit n forced to b.
//
// Bit pattern convention: bit n of a pattern integer is (p >> n) & 1.
// Sign convention for superposition layers: bit 0 -> +amplitude, 1 -> -amplitude.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace nbdet {

using cplx = std::complex<double>;
using BitPattern = std::vector<std::uint8_t>;

enum class Scheme { bpsk, qpsk, psk8, qam16_gray };
enum class ConstellationKind { bijective, non_bijective };

struct ConstellationPoint {
    cplx value;
    int index = 0;
    std::uint64_t multiplicity = 1;  // number of bit patterns mapping here
};

class Constellation {
  public:
    // Direct superposition with equal power allocation: bits 0..N/2-1 add
    // +-a to the real part, bits N/2..N-1 add +-a to the imaginary part,
    // a = 1/sqrt(N). Yields N^2/4 + N + 1 distinct points.
    static Constellation build_dsm_epa(int n_bits);

    // Reference unit-energy alphabets with M = 2^N and Gray labeling.
    static Constellation build_bijective(Scheme scheme);

    // Rebuild from explicit parts (deserialization); validates structure.
    static Constellation from_parts(int n_bits, std::vector<cplx> point_values,
                                    std::optional<std::vector<cplx>> layers,
                                    const std::vector<std::int32_t>* mapper_table);

    int n_bits() const { return n_bits_; }
    int size() const { return static_cast<int>(points_.size()); }
    ConstellationKind kind() const { return kind_; }
    const std::vector<ConstellationPoint>& points() const { return points_; }
    const ConstellationPoint& point(int index) const { return points_[index]; }

    // Per-layer chip amplitudes; present iff built as superposition.
    const std::optional<std::vector<cplx>>& layers() const { return layers_; }

    // X_n^(b): indices of points reachable with bit n fixed to b. For
    // non-bijective constellations the b=0 and b=1 subsets may overlap.
    const std::vector<int>& subset(int n, int b) const;

    const ConstellationPoint& map_bits(const BitPattern& bits) const;
    int map_index(std::uint32_t pattern) const;

    // Pattern -> point index table of size 2^N; built for N <= 16.
    const std::vector<std::int32_t>& mapper_table() const { return mapper_table_; }

    // Multiplicity-weighted mean |x|^2 under equiprobable bits.
    double average_energy() const;

    static std::uint32_t pattern_to_uint(const BitPattern& bits);
    static BitPattern uint_to_pattern(std::uint32_t value, int n_bits);

  private:
    Constellation() = default;
    void build_value_lookup();
    void build_subsets_from_mapper();
    void finalize_kind();

    int n_bits_ = 0;
    std::vector<ConstellationPoint> points_;
    std::optional<std::vector<cplx>> layers_;
    std::vector<std::int32_t> mapper_table_;            // empty when N > 16
    std::vector<std::vector<int>> subsets_;             // [2*n + b]
    std::unordered_map<std::uint64_t, int> value_index_;
    ConstellationKind kind_ = ConstellationKind::bijective;
};

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

}  // namespace nbdet
