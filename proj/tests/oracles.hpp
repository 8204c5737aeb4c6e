#pragma once

// Naive reference computations, written straight from the definitions and
// sharing no code with the bit-parallel kernels or the min-cut solver.

#include <cstdint>
#include <random>
#include <vector>

#include "dirkkl/hypercube.hpp"
#include "dirkkl/rational.hpp"

namespace oracle {

using Table = std::vector<std::uint8_t>;

inline Table table_of(const dirkkl::BooleanFunction& f) {
    Table t(f.size());
    for (std::uint64_t x = 0; x < f.size(); ++x) t[x] = f.evaluate(dirkkl::PointIndex{x}) ? 1 : 0;
    return t;
}

inline Table random_table(unsigned m, std::mt19937_64& rng) {
    Table t(std::size_t{1} << m);
    for (auto& v : t) v = static_cast<std::uint8_t>(rng() & 1u);
    return t;
}

inline unsigned arity_of(const Table& t) {
    unsigned m = 0;
    while ((std::size_t{1} << m) < t.size()) ++m;
    return m;
}

// #{x : f(x) != f(x ^ e_i)} / 2^m
inline dirkkl::Rational influence(const Table& t, unsigned i) {
    std::int64_t c = 0;
    for (std::size_t x = 0; x < t.size(); ++x) c += t[x] != t[x ^ (std::size_t{1} << (i - 1))];
    return dirkkl::Rational(c, static_cast<std::int64_t>(t.size()));
}

// #{x : x <= x ^ e_i, f(x) > f(x ^ e_i)} / 2^(m-1)
inline dirkkl::Rational negative_influence(const Table& t, unsigned i) {
    std::int64_t c = 0;
    const std::size_t e = std::size_t{1} << (i - 1);
    for (std::size_t x = 0; x < t.size(); ++x) {
        if ((x & e) == 0 && t[x] > t[x | e]) ++c;
    }
    return dirkkl::Rational(c, static_cast<std::int64_t>(t.size() / 2));
}

inline unsigned sens(const Table& t, std::size_t x) {
    unsigned s = 0;
    for (unsigned i = 1; i <= arity_of(t); ++i) s += t[x] != t[x ^ (std::size_t{1} << (i - 1))];
    return s;
}

inline unsigned neg_sens(const Table& t, std::size_t x) {
    unsigned s = 0;
    for (unsigned i = 1; i <= arity_of(t); ++i) {
        const std::size_t e = std::size_t{1} << (i - 1);
        if ((x & e) == 0 && t[x] > t[x | e]) ++s;
    }
    return s;
}

// x <= y coordinatewise implies f(x) <= f(y), checked over all pairs.
inline bool monotone_pairwise(const Table& t) {
    for (std::size_t x = 0; x < t.size(); ++x) {
        for (std::size_t y = 0; y < t.size(); ++y) {
            if ((x & ~y) == 0 && t[x] > t[y]) return false;
        }
    }
    return true;
}

inline bool monotone_pairwise(const dirkkl::BooleanFunction& f) {
    return monotone_pairwise(table_of(f));
}

// min over all monotone g of #{f != g}, by enumerating all 2^(2^m) functions
// g and filtering the monotone ones. Only for m <= 3.
inline std::uint64_t distance_enumerated(const Table& t) {
    const std::size_t n = t.size();
    std::uint64_t best = n;
    for (std::uint64_t g = 0; g < (std::uint64_t{1} << n); ++g) {
        Table gt(n);
        for (std::size_t x = 0; x < n; ++x) gt[x] = (g >> x) & 1u;
        if (!monotone_pairwise(gt)) continue;
        std::uint64_t d = 0;
        for (std::size_t x = 0; x < n; ++x) d += t[x] != gt[x];
        best = std::min(best, d);
    }
    return best;
}

}  // namespace oracle
