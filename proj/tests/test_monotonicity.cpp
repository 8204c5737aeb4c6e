#include <gtest/gtest.h>

#include <random>

#include "dirkkl/errors.hpp"
#include "dirkkl/iso_metrics.hpp"
#include "dirkkl/monotonicity.hpp"
#include "oracles.hpp"

using namespace dirkkl;

namespace {

BooleanFunction table_function(unsigned m, std::uint64_t g) {
    return BooleanFunction::from_words(m, {g});
}

}  // namespace

TEST(Eps, Examples) {
    auto parity = distance_to_monotone_exact(build_function(2, "0110"));
    EXPECT_EQ(parity.eps, Rational(1, 4));
    EXPECT_EQ(parity.changed_points, 1u);
    ASSERT_TRUE(parity.witness);
    EXPECT_TRUE(is_monotone(*parity.witness));

    EXPECT_EQ(distance_to_monotone_exact(build_function(1, "10")).eps, Rational(1, 2));
    EXPECT_TRUE(is_zero(distance_to_monotone_exact(build_function(3, "00010111")).eps));
    // anti-dictator on 3 coordinates: half the cube must change
    auto anti = BooleanFunction::from_predicate(3, [](std::uint64_t x) { return (x & 1) == 0; });
    EXPECT_EQ(distance_to_monotone_exact(anti).eps, Rational(1, 2));
}

TEST(Eps, Guards) {
    EXPECT_THROW(distance_to_monotone_bruteforce(build_function(6, std::string(64, '0'))),
                 CapacityError);
    try {
        distance_to_monotone_exact(BooleanFunction::from_words(21, std::vector<std::uint64_t>(1u << 15)));
        FAIL();
    } catch (const CapacityError& e) {
        EXPECT_EQ(e.guard(), "mincut");
    }
    EXPECT_EQ(to_string(EpsMethod::bilinear_proxy), "bilinear-proxy");
}

TEST(MonotoneTables, DedekindCounts) {
    const std::uint64_t expected[] = {3, 6, 20, 168, 7581};
    for (unsigned m = 1; m <= 5; ++m) {
        const auto tables = monotone_tables(m);
        EXPECT_EQ(tables.size(), expected[m - 1]);
        for (auto g : tables) ASSERT_TRUE(is_monotone(table_function(m, g)));
    }
}

TEST(FlowNetwork, Shape) {
    FlowNetwork net(build_function(3, "01101001"));
    EXPECT_EQ(net.node_count(), 10u);
    EXPECT_EQ(net.covering_arc_count(), 12u);
    EXPECT_EQ(net.infinite_capacity(), 9);
    const auto flow = net.max_flow();
    EXPECT_EQ(net.max_flow(), flow);
    auto u = net.min_cut_upset();
    EXPECT_TRUE(is_monotone(u));
    EXPECT_EQ(net.cut_value(u), flow);
}

TEST(Oracle, MinCutMatchesEnumeration) {
    // every function of arity <= 3 against all 2^(2^m) candidates
    for (unsigned m = 1; m <= 3; ++m) {
        for (std::uint64_t g = 0; g < (std::uint64_t{1} << (1u << m)); ++g) {
            auto f = table_function(m, g);
            const auto exact = distance_to_monotone_exact(f);
            EXPECT_EQ(exact.changed_points, oracle::distance_enumerated(oracle::table_of(f)));
        }
    }
}

TEST(Oracle, MinCutMatchesBruteForce) {
    for (std::uint64_t g = 0; g < (std::uint64_t{1} << 16); g += 7) {
        auto f = table_function(4, g);
        EXPECT_EQ(distance_to_monotone_exact(f).eps, distance_to_monotone_bruteforce(f).eps);
    }
    std::mt19937_64 rng(31);
    for (int k = 0; k < 200; ++k) {
        auto f = build_function(5, oracle::random_table(5, rng));
        EXPECT_EQ(distance_to_monotone_exact(f).eps, distance_to_monotone_bruteforce(f).eps);
    }
}

TEST(Property, WitnessAndSandwich) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 120; ++trial) {
        const unsigned m = 1 + trial % 10;
        auto f = build_function(m, oracle::random_table(m, rng));
        const auto r = distance_to_monotone_exact(f);
        ASSERT_TRUE(r.witness);
        EXPECT_TRUE(is_monotone(*r.witness));
        EXPECT_EQ(hamming_distance(f, *r.witness), r.changed_points);
        EXPECT_EQ(dyadic(static_cast<std::int64_t>(r.changed_points), m), r.eps);

        const auto lower = matching_lower_bound(f);
        EXPECT_LE(lower, r.eps);
        EXPECT_LE(r.eps * Rational(2), Rational(1));

        // sorting along each coordinate in turn repairs f and changes at most
        // two points per violated edge: eps <= sum_i Inf^-_i
        Rational neg_sum(0);
        for (unsigned i = 1; i <= m; ++i) neg_sum += negative_influence(f, i);
        EXPECT_LE(r.eps, neg_sum);
    }
}

TEST(Property, ZeroCharacterizations) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned m = 1 + trial % 8;
        oracle::Table t(std::size_t{1} << m);
        // mix random tables with up-sets to get both outcomes
        const std::uint64_t gen = rng() & (t.size() - 1);
        for (std::size_t x = 0; x < t.size(); ++x) t[x] = (x & gen) == gen;
        if (trial % 3 == 0) t = oracle::random_table(m, rng);
        auto f = build_function(m, t);
        const bool zero = is_zero(distance_to_monotone_exact(f).eps);
        EXPECT_EQ(zero, ViolationGraph(f).empty());
        Rational neg_sum(0);
        for (unsigned i = 1; i <= m; ++i) neg_sum += negative_influence(f, i);
        EXPECT_EQ(zero, is_zero(neg_sum));
        EXPECT_EQ(zero, oracle::monotone_pairwise(t));
    }
}

TEST(ViolationGraph, Parity) {
    ViolationGraph g(build_function(2, "0110"));
    EXPECT_EQ(g.left().size(), 2u);
    EXPECT_EQ(g.right().size(), 2u);
    // 01 < 11 and 10 < 11
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.maximum_matching(), 1u);
    EXPECT_EQ(matching_lower_bound(build_function(2, "0110")), Rational(1, 4));
}

TEST(ViolationCounts, MatchNegativeInfluence) {
    auto f = build_function(2, "0110");
    EXPECT_EQ(violated_edge_counts(f), (std::vector<std::uint64_t>{1, 1}));
}

TEST(Bilinear, Examples) {
    // x1 AND NOT y1
    auto f = build_function(2, "0100");
    EXPECT_EQ(bilinear_variance(f, 1), Rational(1, 8));
    EXPECT_TRUE(is_zero(bilinear_variance(build_function(2, "0000"), 1)));
    EXPECT_THROW(bilinear_variance(build_function(2, "0110"), 1), StructureError);
    EXPECT_THROW(bilinear_variance(build_function(3, "00000000"), 1), StructureError);
    // monotone in y is the wrong direction
    EXPECT_THROW(bilinear_variance(build_function(2, "0011"), 1), StructureError);
}
