#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dirkkl/hypercube.hpp"
#include "dirkkl/rational.hpp"

namespace dirkkl {

// Per-point sensitivity counts. neg_sens[x] counts the coordinates i with
// x_i = 0 whose upward flip takes f from 1 to 0, so each decreasing edge is
// charged once, to its lower endpoint.
struct SensitivityProfile {
    unsigned arity = 0;
    std::vector<std::uint8_t> sens;
    std::vector<std::uint8_t> neg_sens;

    std::uint64_t sens_total() const;
    std::uint64_t neg_sens_total() const;
    // histogram[k] = #{x : sens[x] = k}, k = 0..arity.
    std::vector<std::uint64_t> histogram(bool directed) const;
};

// Edge tallies for one coordinate: edges {x, x^{(+)i}} with f(x) != f(x^{(+)i}),
// and those that decrease going up.
struct EdgeCounts {
    std::uint64_t sensitive = 0;
    std::uint64_t decreasing = 0;
};

EdgeCounts edge_counts(const BooleanFunction& f, unsigned i);

SensitivityProfile sensitivity_profile(const BooleanFunction& f);

// Pr_x[f(x) != f(x^{(+)i})].
Rational influence(const BooleanFunction& f, unsigned i);
// #{x : x_i = 0, f(x) = 1, f(x^{(+)i}) = 0} / 2^(m-1).
Rational negative_influence(const BooleanFunction& f, unsigned i);
Rational total_influence(const BooleanFunction& f);

// E_x[sqrt(sens_f(x))], or E_x[sqrt(sens^-_f(x))] when directed.
double talagrand_functional(const BooleanFunction& f, bool directed);
double talagrand_functional(const SensitivityProfile& profile, bool directed);

// Var[f] * sqrt(ln(2 + e / sum_i Inf_i^2)); zero whenever Var[f] is zero.
double eldan_gross_rhs(const BooleanFunction& f);

// max_i Inf_i * m / (Var[f] * ln m). Throws UndefinedRatioError when
// Var[f] = 0 or m < 2.
double kkl_witness_ratio(const BooleanFunction& f);

struct InfluenceReport {
    std::vector<Rational> inf;
    std::vector<Rational> neg_inf;
    Rational total_influence;
    Rational variance;
    double talagrand = 0.0;
    double directed_talagrand = 0.0;
    double eg_rhs = 0.0;
    std::optional<double> kkl_witness_ratio;  // empty when undefined
};

InfluenceReport influence_report(const BooleanFunction& f);
InfluenceReport influence_report(const BooleanFunction& f, const SensitivityProfile& profile);

// One inequality LHS >= Omega(RHS), reported as numbers; the hidden constant
// is never assumed. `ratio` is empty when RHS is zero.
struct InequalityRow {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> ratio;
    // Exact sides, when both are rationals (Poincare).
    std::optional<Rational> exact_lhs;
    std::optional<Rational> exact_rhs;
};

struct InequalityReport {
    std::vector<InequalityRow> rows;

    const InequalityRow* find(std::string_view name) const;
};

// Rows: poincare, talagrand, kkl, eldan_gross, and, when `directed` is set,
// directed_talagrand and directed_kkl (these need `eps`).
InequalityReport inequality_report(const BooleanFunction& f, std::optional<Rational> eps,
                                   bool directed = true);
InequalityReport inequality_report(const InfluenceReport& report, unsigned arity,
                                   std::optional<Rational> eps, bool directed = true);

}  // namespace dirkkl
