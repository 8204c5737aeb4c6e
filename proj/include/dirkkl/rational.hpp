#pragma once

#include <cstdint>

#include <boost/rational.hpp>

namespace dirkkl {

// Exact probabilities. Every denominator that shows up is a power of two
// at most 2^(3*13), so 64-bit components are enough.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Compare against Rational values only: boost::rational's mixed
// rational/integer comparisons recurse forever under C++20 operator rewriting.
inline bool is_zero(const Rational& r) { return r.numerator() == 0; }

// count / 2^k
inline Rational dyadic(std::int64_t count, unsigned k) {
    return Rational(count, std::int64_t{1} << k);
}

}  // namespace dirkkl
