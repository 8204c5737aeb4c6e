#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dirkkl/rational.hpp"

namespace dirkkl {

// Exact tables are kept in memory up to this arity (2^26 bits = 8 MiB).
inline constexpr unsigned kMaxArity = 26;

// A point x of {0,1}^m, encoded as sum_i x_i * 2^(i-1). Coordinate 1 is the
// least significant bit.
struct PointIndex {
    std::uint64_t value = 0;

    constexpr auto operator<=>(const PointIndex&) const = default;
};

// Value of coordinate i (1-based) of the point.
constexpr bool coordinate(PointIndex ix, unsigned i) {
    return ((ix.value >> (i - 1)) & 1u) != 0;
}

// x^{(+)i}: ix with coordinate i toggled. Throws ArgumentError unless 1 <= i <= m.
PointIndex flip(PointIndex ix, unsigned i, unsigned m);

PointIndex encode_point(std::span<const std::uint8_t> coords);
std::vector<std::uint8_t> decode_point(PointIndex ix, unsigned m);

// Bit-packed truth table of f : {0,1}^m -> {0,1}. Bit ix of the table is
// f(ix); bits past 2^m in the last word are always zero. Immutable.
class BooleanFunction {
public:
    // bits[ix] is '0' or '1'.
    static BooleanFunction from_bits(unsigned arity, std::string_view bits);
    // Any trailing garbage past 2^m is masked off.
    static BooleanFunction from_words(unsigned arity, std::vector<std::uint64_t> words);

    template <class Pred>
    static BooleanFunction from_predicate(unsigned arity, Pred&& pred) {
        check_arity(arity);
        std::vector<std::uint64_t> words(word_count(arity), 0);
        const std::uint64_t n = std::uint64_t{1} << arity;
        for (std::uint64_t ix = 0; ix < n; ++ix) {
            if (pred(ix)) words[ix >> 6] |= std::uint64_t{1} << (ix & 63);
        }
        return BooleanFunction(arity, std::move(words));
    }

    unsigned arity() const noexcept { return arity_; }
    std::uint64_t size() const noexcept { return std::uint64_t{1} << arity_; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    // Range-checked lookup.
    bool evaluate(PointIndex ix) const;
    // Unchecked lookup for hot loops.
    bool operator[](std::uint64_t ix) const noexcept {
        return ((words_[ix >> 6] >> (ix & 63)) & 1u) != 0;
    }

    std::uint64_t count_ones() const noexcept;
    std::string to_bit_string() const;

    bool operator==(const BooleanFunction&) const = default;

    static std::size_t word_count(unsigned arity) noexcept {
        return arity >= 6 ? (std::size_t{1} << (arity - 6)) : 1;
    }
    static void check_arity(unsigned arity);

private:
    BooleanFunction(unsigned arity, std::vector<std::uint64_t> words)
        : arity_(arity), words_(std::move(words)) {}

    unsigned arity_;
    std::vector<std::uint64_t> words_;
};

BooleanFunction build_function(unsigned arity, std::string_view bits);
BooleanFunction build_function(unsigned arity, std::span<const std::uint8_t> bits);

bool evaluate(const BooleanFunction& f, PointIndex ix);

struct MeanVariance {
    Rational mean;
    Rational variance;
};

MeanVariance mean_variance(const BooleanFunction& f);

// A partial assignment of coordinates to bits.
class Assignment {
public:
    Assignment() = default;
    Assignment(std::initializer_list<std::pair<unsigned, bool>> fixed);

    // Throws ArgumentError on a repeated coordinate or coordinate 0.
    Assignment& set(unsigned coordinate, bool bit);

    const std::vector<std::pair<unsigned, bool>>& fixed() const noexcept { return fixed_; }
    bool contains(unsigned coordinate) const noexcept;

private:
    std::vector<std::pair<unsigned, bool>> fixed_;
};

// The function on the free coordinates, in their original relative order.
BooleanFunction restrict(const BooleanFunction& f, const Assignment& a);

enum class Direction { increasing, decreasing, both, neither };

std::string_view to_string(Direction d);

Direction monotone_direction(const BooleanFunction& f, unsigned i);

// x <= y implies f(x) <= f(y).
bool is_monotone(const BooleanFunction& f);

// Number of points where f and g differ. Arity must match.
std::uint64_t hamming_distance(const BooleanFunction& f, const BooleanFunction& g);

}  // namespace dirkkl
