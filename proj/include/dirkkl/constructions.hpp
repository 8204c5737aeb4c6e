#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dirkkl/hypercube.hpp"
#include "dirkkl/rational.hpp"

namespace dirkkl {

inline constexpr unsigned kMaxSymbolicTribes = 1u << 20;

// Unbiased integer in [0, bound) from a 64-bit engine. Unlike
// std::uniform_int_distribution this is the same on every standard library.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// The tribes counterexample on {0,1}^n x {0,1}^n:
//   f(x, y) = OR_i (AND_{j in T_i} x_j) AND (1 - y_i)
// with T_1..T_n independent uniform subsets of [n] of size log2 n.
// Coordinates 1..n are x, n+1..2n are y. Tribe members are 1-based, sorted.
struct TribesInstance {
    unsigned n = 0;
    unsigned width = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<unsigned>> tribes;

    // Validates an explicitly given layout (e.g. read from JSON).
    static TribesInstance from_tribes(unsigned n, std::uint64_t seed,
                                      std::vector<std::vector<unsigned>> tribes);

    bool operator==(const TribesInstance&) const = default;
};

// Deterministic in (n, seed). n must be a power of two in [2, 2^20].
TribesInstance sample_counterexample(unsigned n, std::uint64_t seed);

// Materialized truth table on 2n coordinates; needs 2n <= kMaxArity.
BooleanFunction instance_to_function(const TribesInstance& inst);

// Tribes (1-based) all of whose coordinates are set in x. `x` holds n bits,
// bit j-1 of the packed words being x_j.
std::vector<unsigned> fired_tribes(const TribesInstance& inst, std::span<const std::uint64_t> x);
// Convenience for n <= 64.
std::vector<unsigned> fired_tribes(const TribesInstance& inst, PointIndex x);

// Var_y f(x, y) when k tribes fire at x: the restriction is an OR of k
// anti-dictators, so the variance is (1 - 2^-k) 2^-k. Exact for k <= 30.
Rational restricted_variance(unsigned k);
double restricted_variance_value(unsigned k);

Rational conditional_variance(const TribesInstance& inst, std::span<const std::uint64_t> x);
Rational conditional_variance(const TribesInstance& inst, PointIndex x);

// Exact counts over all 2^n points x (n <= 24):
//   by_count[k] = #{x : k tribes fire},  per_tribe[i-1] = #{x : tribe i fires}.
struct FiringCounts {
    std::vector<std::uint64_t> by_count;
    std::vector<std::uint64_t> per_tribe;
};

FiringCounts firing_counts(const TribesInstance& inst);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Monte Carlo over uniform x. Inf^- of y-coordinate n+i is estimated from
// its closed form 2 * E_x[1{tribe i fires} 2^-k(x)].
struct SampledReport {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> fired_histogram;  // index k = number fired
    Estimate fired_mean;
    Estimate p_none;
    Estimate p_exactly_one;
    Estimate p_at_least_two;
    Estimate conditional_variance;  // E_x[Var_y f(x, y)]
    std::vector<Estimate> neg_inf_y;
    Estimate max_neg_inf_y;  // the largest per-coordinate estimate, with its error
};

// Deterministic in (inst, samples, seed), whatever the number of workers.
// Samples are split into fixed chunks; chunk c draws from seed ^ c.
SampledReport estimate_metrics(const TribesInstance& inst, std::uint64_t samples,
                               std::uint64_t seed, unsigned workers = 0);

// Classic functions used as a corpus.
enum class ZooKind { constant, dictator, anti_dictator, parity, majority, tribes_bl, random };

struct ZooSpec {
    ZooKind kind = ZooKind::constant;
    unsigned arity = 0;       // all but tribes_bl
    unsigned coordinate = 1;  // dictator, anti_dictator
    bool value = false;       // constant
    unsigned width = 0;       // tribes_bl: b
    unsigned count = 0;       // tribes_bl: s
    std::uint64_t seed = 0;   // random

    // name in {constant, dictator, anti_dictator, parity, majority, tribes_bl,
    // random}; keys m, i, value, b, s, seed. Unknown keys are an ArgumentError.
    static ZooSpec parse(const std::string& name, const std::map<std::string, std::string>& params);
};

std::string to_string(ZooKind k);

BooleanFunction zoo(const ZooSpec& spec);

}  // namespace dirkkl
