#include "dirkkl/hypercube.hpp"

#include <algorithm>
#include <bit>

#include "dirkkl/edge_kernel.hpp"
#include "dirkkl/errors.hpp"

namespace dirkkl {

namespace {

void check_coordinate(unsigned i, unsigned m) {
    if (i < 1 || i > m) {
        throw ArgumentError("coordinate " + std::to_string(i) + " out of range [1, " +
                            std::to_string(m) + "]");
    }
}

std::uint64_t tail_mask(unsigned arity) {
    return arity >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << arity)) - 1;
}

}  // namespace

PointIndex flip(PointIndex ix, unsigned i, unsigned m) {
    check_coordinate(i, m);
    return PointIndex{ix.value ^ (std::uint64_t{1} << (i - 1))};
}

PointIndex encode_point(std::span<const std::uint8_t> coords) {
    if (coords.size() > 64) throw ArgumentError("point has more than 64 coordinates");
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (coords[k] > 1) throw ArgumentError("coordinate values must be 0 or 1");
        v |= std::uint64_t{coords[k]} << k;
    }
    return PointIndex{v};
}

std::vector<std::uint8_t> decode_point(PointIndex ix, unsigned m) {
    std::vector<std::uint8_t> out(m);
    for (unsigned k = 0; k < m; ++k) out[k] = static_cast<std::uint8_t>((ix.value >> k) & 1u);
    return out;
}

void BooleanFunction::check_arity(unsigned arity) {
    if (arity < 1 || arity > kMaxArity) {
        throw CapacityError("arity", "arity " + std::to_string(arity) + " outside [1, " +
                                         std::to_string(kMaxArity) + "]");
    }
}

BooleanFunction BooleanFunction::from_bits(unsigned arity, std::string_view bits) {
    check_arity(arity);
    const std::uint64_t expected = std::uint64_t{1} << arity;
    if (bits.size() != expected) {
        throw ArgumentError("truth table length mismatch: expected " + std::to_string(expected) +
                            " bits, got " + std::to_string(bits.size()));
    }
    std::vector<std::uint64_t> words(word_count(arity), 0);
    for (std::uint64_t ix = 0; ix < expected; ++ix) {
        const char c = bits[ix];
        if (c == '1') {
            words[ix >> 6] |= std::uint64_t{1} << (ix & 63);
        } else if (c != '0') {
            throw ArgumentError("truth table character at position " + std::to_string(ix) +
                                " is not 0 or 1");
        }
    }
    return BooleanFunction(arity, std::move(words));
}

BooleanFunction BooleanFunction::from_words(unsigned arity, std::vector<std::uint64_t> words) {
    check_arity(arity);
    if (words.size() != word_count(arity)) {
        throw ArgumentError("truth table word count mismatch: expected " +
                            std::to_string(word_count(arity)) + ", got " +
                            std::to_string(words.size()));
    }
    words.back() &= tail_mask(arity);
    return BooleanFunction(arity, std::move(words));
}

bool BooleanFunction::evaluate(PointIndex ix) const {
    if (ix.value >= size()) {
        throw ArgumentError("point index " + std::to_string(ix.value) + " out of range for arity " +
                            std::to_string(arity_));
    }
    return (*this)[ix.value];
}

std::uint64_t BooleanFunction::count_ones() const noexcept {
    std::uint64_t total = 0;
    for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
    return total;
}

std::string BooleanFunction::to_bit_string() const {
    std::string out(size(), '0');
    for (std::uint64_t ix = 0; ix < size(); ++ix) {
        if ((*this)[ix]) out[ix] = '1';
    }
    return out;
}

BooleanFunction build_function(unsigned arity, std::string_view bits) {
    return BooleanFunction::from_bits(arity, bits);
}

BooleanFunction build_function(unsigned arity, std::span<const std::uint8_t> bits) {
    BooleanFunction::check_arity(arity);
    const std::uint64_t expected = std::uint64_t{1} << arity;
    if (bits.size() != expected) {
        throw ArgumentError("truth table length mismatch: expected " + std::to_string(expected) +
                            " bits, got " + std::to_string(bits.size()));
    }
    return BooleanFunction::from_predicate(arity, [&](std::uint64_t ix) { return bits[ix] != 0; });
}

bool evaluate(const BooleanFunction& f, PointIndex ix) { return f.evaluate(ix); }

MeanVariance mean_variance(const BooleanFunction& f) {
    const auto ones = static_cast<std::int64_t>(f.count_ones());
    const auto total = static_cast<std::int64_t>(f.size());
    // mean (1 - mean) = ones (total - ones) / total^2
    return {Rational(ones, total), Rational(ones * (total - ones), total) / total};
}

Assignment::Assignment(std::initializer_list<std::pair<unsigned, bool>> fixed) {
    for (const auto& [c, b] : fixed) set(c, b);
}

Assignment& Assignment::set(unsigned coordinate, bool bit) {
    if (coordinate == 0) throw ArgumentError("coordinates are 1-based");
    if (contains(coordinate)) {
        throw ArgumentError("coordinate " + std::to_string(coordinate) + " assigned twice");
    }
    fixed_.emplace_back(coordinate, bit);
    return *this;
}

bool Assignment::contains(unsigned coordinate) const noexcept {
    return std::any_of(fixed_.begin(), fixed_.end(),
                       [&](const auto& p) { return p.first == coordinate; });
}

BooleanFunction restrict(const BooleanFunction& f, const Assignment& a) {
    const unsigned m = f.arity();
    std::uint64_t fixed_mask = 0;
    std::uint64_t base = 0;
    for (const auto& [c, bit] : a.fixed()) {
        check_coordinate(c, m);
        fixed_mask |= std::uint64_t{1} << (c - 1);
        if (bit) base |= std::uint64_t{1} << (c - 1);
    }
    std::vector<unsigned> free_bits;
    for (unsigned b = 0; b < m; ++b) {
        if (!((fixed_mask >> b) & 1u)) free_bits.push_back(b);
    }
    if (free_bits.empty()) throw ArgumentError("restriction fixes every coordinate");

    const auto k = static_cast<unsigned>(free_bits.size());
    return BooleanFunction::from_predicate(k, [&](std::uint64_t ix) {
        std::uint64_t full = base;
        for (unsigned j = 0; j < k; ++j) {
            if ((ix >> j) & 1u) full |= std::uint64_t{1} << free_bits[j];
        }
        return f[full];
    });
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::increasing: return "increasing";
        case Direction::decreasing: return "decreasing";
        case Direction::both: return "both";
        case Direction::neither: return "neither";
    }
    return "?";
}

Direction monotone_direction(const BooleanFunction& f, unsigned i) {
    check_coordinate(i, f.arity());
    bool goes_down = false;
    bool goes_up = false;
    detail::for_each_edge_word(f, i, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
        goes_down = goes_down || (lo & ~hi) != 0;
        goes_up = goes_up || (~lo & hi) != 0;
    });
    if (goes_down && goes_up) return Direction::neither;
    if (goes_down) return Direction::decreasing;
    if (goes_up) return Direction::increasing;
    return Direction::both;
}

bool is_monotone(const BooleanFunction& f) {
    // Every comparable pair is joined by a chain of covering pairs.
    for (unsigned i = 1; i <= f.arity(); ++i) {
        const auto d = monotone_direction(f, i);
        if (d != Direction::increasing && d != Direction::both) return false;
    }
    return true;
}

std::uint64_t hamming_distance(const BooleanFunction& f, const BooleanFunction& g) {
    if (f.arity() != g.arity()) throw ArgumentError("arity mismatch");
    std::uint64_t d = 0;
    const auto a = f.words();
    const auto b = g.words();
    for (std::size_t w = 0; w < a.size(); ++w) d += static_cast<std::uint64_t>(std::popcount(a[w] ^ b[w]));
    return d;
}

}  // namespace dirkkl
