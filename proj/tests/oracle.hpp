#pragma once

// Test-only reference computations. Nothing here touches the packed-word
// arithmetic or the interval machinery under test: products are formed on
// unpacked exponent vectors and intervals are classified pair by pair.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "spmul/polynomial.hpp"
#include "spmul/split.hpp"

namespace spmul::oracle {

// Product over unpacked exponent vectors, accumulated in an ordered map.
template <Coefficient C>
std::map<std::vector<std::uint32_t>, C> product_map(const Polynomial<C>& a, const Polynomial<C>& b) {
    const auto& layout = a.layout();
    std::map<std::vector<std::uint32_t>, C> acc;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto va = layout.unpack(a.exponents()[i]);
        for (std::size_t j = 0; j < b.size(); ++j) {
            auto v = layout.unpack(b.exponents()[j]);
            for (std::size_t k = 0; k < v.size(); ++k)
                v[k] += va[k];
            auto [it, inserted] = acc.try_emplace(v, CoeffTraits<C>::from_int(0));
            it->second += a.coefficients()[i] * b.coefficients()[j];
        }
    }
    for (auto it = acc.begin(); it != acc.end();)
        it = CoeffTraits<C>::is_zero(it->second) ? acc.erase(it) : std::next(it);
    return acc;
}

template <Coefficient C>
std::map<std::vector<std::uint32_t>, C> as_map(const Polynomial<C>& p) {
    std::map<std::vector<std::uint32_t>, C> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        out.emplace(p.layout().unpack(p.exponents()[i]), p.coefficients()[i]);
    return out;
}

// in[i][j] is true when a[i]+b[j] lies in [lo, hi). Comparisons use the
// unpacked vectors re-packed one by one, not the packed sum.
inline std::vector<std::vector<bool>> classify(const ExponentLayout& layout,
                                               std::span<const Exponent> a,
                                               std::span<const Exponent> b, Exponent lo,
                                               Exponent hi) {
    std::vector<std::vector<bool>> in(a.size(), std::vector<bool>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto va = layout.unpack(a[i]);
        for (std::size_t j = 0; j < b.size(); ++j) {
            auto v = layout.unpack(b[j]);
            for (std::size_t k = 0; k < v.size(); ++k)
                v[k] += va[k];
            const Exponent s = layout.pack(v);
            in[i][j] = !(s < lo) && s < hi;
        }
    }
    return in;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

// Number of exponent vectors in m variables with total degree <= d, by
// enumeration.
inline std::uint64_t count_monomials_up_to(std::size_t m, std::uint32_t d) {
    if (m == 0)
        return 1;
    std::uint64_t n = 0;
    for (std::uint32_t e = 0; e <= d; ++e)
        n += count_monomials_up_to(m - 1, d - e);
    return n;
}

} // namespace spmul::oracle
