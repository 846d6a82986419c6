#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace shocksim {

/// Multi-index alpha in N0^3.
struct MultiIndex {
    int a1 = 0, a2 = 0, a3 = 0;

    int order() const { return a1 + a2 + a3; }
    int check_order() const { return a2 + a3; }
    int operator[](int i) const { return i == 0 ? a1 : (i == 1 ? a2 : a3); }
    bool operator==(const MultiIndex& o) const {
        return a1 == o.a1 && a2 == o.a2 && a3 == o.a3;
    }
};

/// All multi-indices with |alpha| <= max_order, ordered by order then
/// lexicographically. The ordering is fixed; serialization relies on it.
inline std::vector<MultiIndex> multi_indices_up_to(int max_order) {
    std::vector<MultiIndex> out;
    for (int n = 0; n <= max_order; ++n)
        for (int a1 = n; a1 >= 0; --a1)
            for (int a2 = n - a1; a2 >= 0; --a2)
                out.push_back({a1, a2, n - a1 - a2});
    return out;
}

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double multi_factorial(const MultiIndex& a) {
    return factorial(a.a1) * factorial(a.a2) * factorial(a.a3);
}

/// Catalan numbers C_0..C_n as doubles (exact through n = 30).
inline std::vector<double> catalan_numbers(int n) {
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[0] = 1.0;
    for (int i = 0; i < n; ++i)
        c[static_cast<std::size_t>(i) + 1] =
            c[static_cast<std::size_t>(i)] * 2.0 * (2 * i + 1) / (i + 2);
    return c;
}

} // namespace shocksim
