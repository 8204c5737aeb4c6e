#pragma once

#include <array>
#include <cstdint>

#include "dirkkl/hypercube.hpp"

namespace dirkkl::detail {

// Word masks selecting the positions whose bit b is zero, b < 6.
inline constexpr std::array<std::uint64_t, 6> kLowerHalfMask = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

// Visits every i-edge {x, x^{(+)i}} with x_i = 0, 64 at a time.
//
// fn(word_index, lo, hi) receives aligned words: bit p of `lo` is f(x) and
// bit p of `hi` is f(x^{(+)i}) for the lower endpoint x = 64*word_index + p.
// Positions that are not lower endpoints (or lie past 2^m) are zero in both
// words, so callers must only combine them in ways that vanish on (0, 0):
// lo ^ hi, lo & ~hi, ~lo & hi.
template <class Fn>
void for_each_edge_word(const BooleanFunction& f, unsigned i, Fn&& fn) {
    const unsigned b = i - 1;
    const auto words = f.words();
    if (b < 6) {
        const std::uint64_t mask = kLowerHalfMask[b];
        const unsigned shift = 1u << b;
        for (std::size_t w = 0; w < words.size(); ++w) {
            fn(static_cast<std::uint64_t>(w), words[w] & mask, (words[w] >> shift) & mask);
        }
    } else {
        const std::size_t stride = std::size_t{1} << (b - 6);
        for (std::size_t base = 0; base < words.size(); base += 2 * stride) {
            for (std::size_t w = base; w < base + stride; ++w) {
                fn(static_cast<std::uint64_t>(w), words[w], words[w + stride]);
            }
        }
    }
}

}  // namespace dirkkl::detail
