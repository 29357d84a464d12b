#pragma once

// max* primitive: log(e^a + e^b) and its max-log / table-lookup variants.
// All log-domain sums in the library are built from these.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

namespace nbdet {

enum class MaxstarImpl { exact, approx_max, table_lookup };

namespace detail {

// Piecewise-constant correction table: 8 uniform cells on |a-b| in [0,5),
// cell value = correction at the cell midpoint, zero beyond 5.
inline constexpr double kTableCellWidth = 0.625;
inline constexpr int kTableCells = 8;

inline const std::array<double, kTableCells>& correction_table() {
    static const std::array<double, kTableCells> table = [] {
        std::array<double, kTableCells> t{};
        for (int i = 0; i < kTableCells; ++i) {
            t[i] = std::log1p(std::exp(-(i + 0.5) * kTableCellWidth));
        }
        return t;
    }();
    return table;
}

}  // namespace detail

// Exact correction term log(1 + e^{-|a-b|}); lies in (0, ln 2].
inline double maxstar_correction(double diff_abs) {
    // e^{-d} below 1 ulp of 1.0 contributes nothing in double precision
    if (diff_abs > 37.0) return 0.0;
    return std::log1p(std::exp(-diff_abs));
}

inline double maxstar(double a, double b, MaxstarImpl impl = MaxstarImpl::exact) {
    const double inf = std::numeric_limits<double>::infinity();
    if (a == -inf) return b;
    if (b == -inf) return a;
    const double m = std::max(a, b);
    switch (impl) {
        case MaxstarImpl::approx_max:
            return m;
        case MaxstarImpl::table_lookup: {
            const double d = std::abs(a - b);
            if (d >= detail::kTableCells * detail::kTableCellWidth) return m;
            return m + detail::correction_table()[static_cast<int>(d / detail::kTableCellWidth)];
        }
        case MaxstarImpl::exact:
        default:
            return m + maxstar_correction(std::abs(a - b));
    }
}

// Fold of maxstar over a sequence. Exact mode is evaluated as a max-shifted
// log-sum-exp so the result is order-independent to ~1 ulp.
inline double maxstar_reduce(std::span<const double> values,
                             MaxstarImpl impl = MaxstarImpl::exact) {
    if (values.empty()) throw std::invalid_argument("maxstar_reduce: empty sequence");
    if (impl == MaxstarImpl::exact) {
        const double m = *std::max_element(values.begin(), values.end());
        if (std::isinf(m)) return m;
        double sum = 0.0;
        for (double v : values) sum += std::exp(v - m);
        return m + std::log(sum);
    }
    double acc = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) acc = maxstar(acc, values[i], impl);
    return acc;
}

}  // namespace nbdet
