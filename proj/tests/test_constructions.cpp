#include <gtest/gtest.h>

#include <cmath>

#include "dirkkl/constructions.hpp"
#include "dirkkl/errors.hpp"
#include "dirkkl/iso_metrics.hpp"
#include "dirkkl/monotonicity.hpp"
#include "oracles.hpp"

using namespace dirkkl;

namespace {

// f(x, y) evaluated straight from the layout.
bool naive_tribes(const TribesInstance& inst, std::uint64_t point) {
    for (unsigned i = 1; i <= inst.n; ++i) {
        bool all = true;
        for (auto j : inst.tribes[i - 1]) all = all && ((point >> (j - 1)) & 1u);
        const bool yi = (point >> (inst.n + i - 1)) & 1u;
        if (all && !yi) return true;
    }
    return false;
}

unsigned naive_fired(const TribesInstance& inst, std::uint64_t x) {
    unsigned k = 0;
    for (const auto& t : inst.tribes) {
        bool all = true;
        for (auto j : t) all = all && ((x >> (j - 1)) & 1u);
        k += all;
    }
    return k;
}

}  // namespace

TEST(Sampling, ShapeAndDeterminism) {
    for (unsigned n : {2u, 4u, 8u, 16u, 64u}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto a = sample_counterexample(n, seed);
            EXPECT_EQ(a, sample_counterexample(n, seed));
            EXPECT_EQ(a.tribes.size(), n);
            EXPECT_EQ(a.width, static_cast<unsigned>(std::log2(n)));
            for (const auto& t : a.tribes) {
                ASSERT_EQ(t.size(), a.width);
                EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
                EXPECT_EQ(std::adjacent_find(t.begin(), t.end()), t.end());
                EXPECT_GE(t.front(), 1u);
                EXPECT_LE(t.back(), n);
            }
        }
    }
    EXPECT_NE(sample_counterexample(16, 1), sample_counterexample(16, 2));
}

TEST(Sampling, Errors) {
    EXPECT_THROW(sample_counterexample(3, 1), ArgumentError);
    EXPECT_THROW(sample_counterexample(1, 1), ArgumentError);
    EXPECT_THROW(sample_counterexample(0, 1), ArgumentError);
    EXPECT_THROW(TribesInstance::from_tribes(2, 0, {{1}}), ArgumentError);
    EXPECT_THROW(TribesInstance::from_tribes(2, 0, {{1}, {3}}), ArgumentError);
    EXPECT_THROW(TribesInstance::from_tribes(4, 0, {{1, 1}, {1, 2}, {1, 2}, {1, 2}}),
                 ArgumentError);
    EXPECT_NO_THROW(TribesInstance::from_tribes(2, 0, {{2}, {2}}));
}

TEST(Sampling, UniformBelowStaysInRange) {
    std::mt19937_64 rng(1);
    std::vector<int> hits(7, 0);
    for (int k = 0; k < 7000; ++k) ++hits[uniform_below(rng, 7)];
    for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Sampling, GoldenLayout) {
    // frozen: both tribes are {1} for n = 2, seed = 1
    const auto inst = sample_counterexample(2, 1);
    EXPECT_EQ(inst.tribes, (std::vector<std::vector<unsigned>>{{1}, {1}}));
    EXPECT_EQ(instance_to_function(inst).to_bit_string(), "0101010101010000");
}

TEST(Tribes, FunctionMatchesDefinition) {
    for (unsigned n : {2u, 4u, 8u}) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const auto inst = sample_counterexample(n, seed);
            const auto f = instance_to_function(inst);
            ASSERT_EQ(f.arity(), 2 * n);
            for (std::uint64_t p = 0; p < f.size(); ++p) ASSERT_EQ(f[p], naive_tribes(inst, p));
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
                const auto fired = fired_tribes(inst, PointIndex{x});
                ASSERT_EQ(fired.size(), naive_fired(inst, x));
                EXPECT_EQ(conditional_variance(inst, PointIndex{x}),
                          restricted_variance(static_cast<unsigned>(fired.size())));
            }
        }
    }
}

TEST(Tribes, RestrictedVariance) {
    EXPECT_TRUE(is_zero(restricted_variance(0)));
    EXPECT_EQ(restricted_variance(1), Rational(1, 4));
    EXPECT_EQ(restricted_variance(2), Rational(3, 16));
    EXPECT_DOUBLE_EQ(restricted_variance_value(3), 7.0 / 64.0);
    EXPECT_THROW(restricted_variance(31), ArgumentError);
    // the restriction is an OR of k anti-dictators
    for (unsigned k = 1; k <= 6; ++k) {
        auto g = BooleanFunction::from_predicate(
            k, [&](std::uint64_t y) { return y != (std::uint64_t{1} << k) - 1; });
        EXPECT_EQ(mean_variance(g).variance, restricted_variance(k));
    }
}

TEST(Tribes, ExactIdentities) {
    for (unsigned n : {2u, 4u, 8u}) {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            const auto inst = sample_counterexample(n, seed);
            const auto f = instance_to_function(inst);
            const auto counts = firing_counts(inst);
            const std::uint64_t points = std::uint64_t{1} << n;

            // each tribe fires on exactly 2^(n - w) points: Pr = 1/n
            for (auto c : counts.per_tribe) EXPECT_EQ(c * n, points);

            // E_x Var_y = sum_k Pr[k fired] * (1 - 2^-k) 2^-k
            Rational expected(0);
            for (unsigned k = 0; k < counts.by_count.size(); ++k) {
                expected += Rational(static_cast<std::int64_t>(counts.by_count[k]),
                                     static_cast<std::int64_t>(points)) *
                            restricted_variance(k);
            }
            EXPECT_EQ(bilinear_variance(f, n), expected);

            for (unsigned i = 1; i <= n; ++i) {
                EXPECT_TRUE(is_zero(negative_influence(f, i)));
                EXPECT_LE(negative_influence(f, n + i), Rational(1, static_cast<std::int64_t>(n)));
            }
        }
    }
}

TEST(Tribes, WordSpanOverload) {
    const auto inst = sample_counterexample(128, 3);
    std::vector<std::uint64_t> x(2, ~std::uint64_t{0});
    EXPECT_EQ(fired_tribes(inst, x).size(), 128u);
    x.assign(2, 0);
    EXPECT_TRUE(fired_tribes(inst, x).empty());
    EXPECT_TRUE(is_zero(conditional_variance(inst, x)));
}

TEST(Estimate, DeterministicAcrossWorkers) {
    const auto inst = sample_counterexample(16, 2);
    const auto a = estimate_metrics(inst, 50000, 9, 1);
    const auto b = estimate_metrics(inst, 50000, 9, 3);
    EXPECT_EQ(a.fired_histogram, b.fired_histogram);
    EXPECT_EQ(a.conditional_variance.mean, b.conditional_variance.mean);
    EXPECT_EQ(a.max_neg_inf_y.mean, b.max_neg_inf_y.mean);
    EXPECT_EQ(a.neg_inf_y.size(), 16u);
}

TEST(Estimate, AgreesWithExact) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto inst = sample_counterexample(8, seed);
        const auto f = instance_to_function(inst);
        const auto est = estimate_metrics(inst, 200000, seed, 1);
        const double exact_bv = to_double(bilinear_variance(f, 8));
        EXPECT_NEAR(est.conditional_variance.mean, exact_bv,
                    5 * est.conditional_variance.std_error + 1e-12);
        for (unsigned i = 1; i <= 8; ++i) {
            const auto& e = est.neg_inf_y[i - 1];
            EXPECT_NEAR(e.mean, to_double(negative_influence(f, 8 + i)), 5 * e.std_error + 1e-12);
        }
        EXPECT_NEAR(est.fired_mean.mean, 1.0, 5 * est.fired_mean.std_error);
        EXPECT_NEAR(est.p_none.mean + est.p_exactly_one.mean + est.p_at_least_two.mean, 1.0, 1e-12);
    }
}

TEST(Zoo, Identities) {
    auto zp = [](const std::string& name, std::map<std::string, std::string> kv) {
        return zoo(ZooSpec::parse(name, kv));
    };
    EXPECT_EQ(zp("constant", {{"m", "3"}, {"value", "1"}}).count_ones(), 8u);
    EXPECT_EQ(zp("dictator", {{"m", "2"}, {"i", "1"}}).to_bit_string(), "0101");
    EXPECT_EQ(zp("anti_dictator", {{"m", "2"}, {"i", "2"}}).to_bit_string(), "1100");
    EXPECT_EQ(zp("parity", {{"m", "2"}}).to_bit_string(), "0110");
    EXPECT_EQ(zp("majority", {{"m", "3"}}).to_bit_string(), "00010111");
    EXPECT_EQ(zp("majority", {{"m", "2"}}).to_bit_string(), "0001");
    // tribes_bl: OR of s ANDs of width b
    auto t = zp("tribes_bl", {{"b", "2"}, {"s", "2"}});
    EXPECT_EQ(t.arity(), 4u);
    EXPECT_TRUE(is_monotone(t));
    EXPECT_EQ(t.count_ones(), 7u);
    EXPECT_EQ(zp("random", {{"m", "8"}, {"seed", "4"}}), zp("random", {{"m", "8"}, {"seed", "4"}}));
    EXPECT_EQ(to_string(ZooKind::tribes_bl), "tribes_bl");

    EXPECT_THROW(ZooSpec::parse("nope", {{"m", "2"}}), ArgumentError);
    EXPECT_THROW(ZooSpec::parse("parity", {{"m", "2"}, {"q", "1"}}), ArgumentError);
    EXPECT_THROW(zp("dictator", {{"m", "2"}, {"i", "3"}}), ArgumentError);
    EXPECT_THROW(ZooSpec::parse("parity", {}), ArgumentError);
}
