#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dirkkl/errors.hpp"
#include "dirkkl/iso_metrics.hpp"
#include "oracles.hpp"

using namespace dirkkl;

namespace {

double naive_talagrand(const oracle::Table& t, bool directed) {
    double acc = 0.0;
    for (std::size_t x = 0; x < t.size(); ++x) {
        acc += std::sqrt(static_cast<double>(directed ? oracle::neg_sens(t, x) : oracle::sens(t, x)));
    }
    return acc / static_cast<double>(t.size());
}

void expect_matches_oracle(const oracle::Table& t) {
    const unsigned m = oracle::arity_of(t);
    auto f = build_function(m, t);
    const auto p = sensitivity_profile(f);
    for (std::size_t x = 0; x < t.size(); ++x) {
        ASSERT_EQ(p.sens[x], oracle::sens(t, x)) << "x=" << x;
        ASSERT_EQ(p.neg_sens[x], oracle::neg_sens(t, x)) << "x=" << x;
    }
    for (unsigned i = 1; i <= m; ++i) {
        ASSERT_EQ(influence(f, i), oracle::influence(t, i));
        ASSERT_EQ(negative_influence(f, i), oracle::negative_influence(t, i));
    }
    EXPECT_NEAR(talagrand_functional(f, false), naive_talagrand(t, false), 1e-12);
    EXPECT_NEAR(talagrand_functional(f, true), naive_talagrand(t, true), 1e-12);
}

}  // namespace

TEST(Influence, Dictator) {
    auto f = build_function(2, "0101");
    EXPECT_EQ(influence(f, 1), Rational(1));
    EXPECT_TRUE(is_zero(influence(f, 2)));
    EXPECT_TRUE(is_zero(negative_influence(f, 1)));
    EXPECT_EQ(total_influence(f), Rational(1));
}

TEST(Influence, Parity) {
    auto f = build_function(2, "0110");
    const auto p = sensitivity_profile(f);
    EXPECT_EQ(p.sens, (std::vector<std::uint8_t>{2, 2, 2, 2}));
    EXPECT_EQ(p.neg_sens, (std::vector<std::uint8_t>{0, 1, 1, 0}));
    EXPECT_EQ(negative_influence(f, 1), Rational(1, 2));
    EXPECT_EQ(negative_influence(f, 2), Rational(1, 2));
}

TEST(Influence, Majority3) {
    auto f = build_function(3, "00010111");
    for (unsigned i = 1; i <= 3; ++i) EXPECT_EQ(influence(f, i), Rational(1, 2));
    EXPECT_EQ(total_influence(f), Rational(3, 2));
    EXPECT_NEAR(talagrand_functional(f, false), 1.0606601717798214, 1e-12);
    EXPECT_DOUBLE_EQ(talagrand_functional(f, true), 0.0);
}

TEST(Influence, CoordinateOutOfRange) {
    auto f = build_function(2, "0110");
    EXPECT_THROW(influence(f, 0), ArgumentError);
    EXPECT_THROW(negative_influence(f, 3), ArgumentError);
}

TEST(Functionals, EldanGrossExamples) {
    EXPECT_NEAR(eldan_gross_rhs(build_function(1, "01")), 0.31139250893487014, 1e-9);
    EXPECT_NEAR(eldan_gross_rhs(build_function(2, "0110")), 0.27519144029594456, 1e-9);
    EXPECT_DOUBLE_EQ(eldan_gross_rhs(build_function(2, "1111")), 0.0);
}

TEST(Functionals, KklRatio) {
    EXPECT_NEAR(kkl_witness_ratio(build_function(2, "0101")), 11.541560327111707, 1e-9);
    EXPECT_THROW(kkl_witness_ratio(build_function(1, "01")), UndefinedRatioError);
    EXPECT_THROW(kkl_witness_ratio(build_function(3, "00000000")), UndefinedRatioError);
    EXPECT_FALSE(influence_report(build_function(2, "0000")).kkl_witness_ratio);
}

TEST(Report, InequalityRows) {
    auto f = build_function(2, "0110");
    auto r = inequality_report(f, Rational(1, 4));
    ASSERT_EQ(r.rows.size(), 6u);
    const auto* p = r.find("poincare");
    ASSERT_NE(p, nullptr);
    EXPECT_EQ(*p->exact_lhs, Rational(2));
    EXPECT_EQ(*p->exact_rhs, Rational(1, 4));
    EXPECT_DOUBLE_EQ(*p->ratio, 8.0);
    const auto* dt = r.find("directed_talagrand");
    ASSERT_NE(dt, nullptr);
    EXPECT_DOUBLE_EQ(dt->lhs, 0.5);
    EXPECT_DOUBLE_EQ(*dt->ratio, 2.0);
    EXPECT_EQ(r.find("nonsense"), nullptr);

    EXPECT_THROW(inequality_report(f, std::nullopt), ArgumentError);
    EXPECT_EQ(inequality_report(f, std::nullopt, false).rows.size(), 4u);

    // zero right-hand side leaves the ratio undefined
    auto c = inequality_report(build_function(2, "1111"), Rational(0));
    for (const auto& row : c.rows) EXPECT_FALSE(row.ratio) << row.name;
}

TEST(Oracle, ExhaustiveUpToFour) {
    for (unsigned m = 1; m <= 4; ++m) {
        for (std::uint64_t g = 0; g < (std::uint64_t{1} << (1u << m)); ++g) {
            oracle::Table t(std::size_t{1} << m);
            for (std::size_t x = 0; x < t.size(); ++x) t[x] = (g >> x) & 1u;
            expect_matches_oracle(t);
        }
    }
}

TEST(Oracle, RandomAcrossWordBoundaries) {
    std::mt19937_64 rng(17);
    for (unsigned m = 5; m <= 11; ++m) {
        for (int k = 0; k < 20; ++k) expect_matches_oracle(oracle::random_table(m, rng));
    }
}

TEST(Property, Identities) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        const unsigned m = 1 + trial % 10;
        auto f = build_function(m, oracle::random_table(m, rng));
        const auto p = sensitivity_profile(f);
        const auto r = influence_report(f, p);
        Rational neg_sum(0);
        for (unsigned i = 1; i <= m; ++i) {
            EXPECT_LE(r.neg_inf[i - 1], r.inf[i - 1]);
            neg_sum += r.neg_inf[i - 1];
        }
        // E[sens] = TInf and sum of sens^- counts each decreasing edge once
        EXPECT_EQ(dyadic(static_cast<std::int64_t>(p.sens_total()), m), r.total_influence);
        EXPECT_EQ(dyadic(static_cast<std::int64_t>(p.neg_sens_total()), m - 1), neg_sum);
        EXPECT_LE(r.directed_talagrand, r.talagrand + 1e-12);
        if (!is_zero(r.variance)) EXPECT_GE(r.total_influence, Rational(4) * r.variance);
    }
}

TEST(Property, MonotoneHasNoNegativeInfluence) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const unsigned m = 2 + trial % 8;
        auto t = oracle::random_table(m, rng);
        auto f = build_function(m, t);
        Rational neg_sum(0);
        for (unsigned i = 1; i <= m; ++i) neg_sum += negative_influence(f, i);
        EXPECT_EQ(is_zero(neg_sum), is_monotone(f));
        // OR with a high-weight up-set keeps it random; a threshold is monotone
        auto thr = BooleanFunction::from_predicate(
            m, [&](std::uint64_t x) { return std::popcount(x) * 2 > static_cast<int>(m); });
        for (unsigned i = 1; i <= m; ++i) EXPECT_TRUE(is_zero(negative_influence(thr, i)));
    }
}
