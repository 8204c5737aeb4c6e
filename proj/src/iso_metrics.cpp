#include "dirkkl/iso_metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "dirkkl/edge_kernel.hpp"
#include "dirkkl/errors.hpp"

namespace dirkkl {

namespace {

void check_coordinate(const BooleanFunction& f, unsigned i) {
    if (i < 1 || i > f.arity()) {
        throw ArgumentError("coordinate " + std::to_string(i) + " out of range [1, " +
                            std::to_string(f.arity()) + "]");
    }
}

template <class Fn>
void for_each_set_bit(std::uint64_t word, std::uint64_t offset, Fn&& fn) {
    while (word != 0) {
        fn(offset + static_cast<std::uint64_t>(std::countr_zero(word)));
        word &= word - 1;
    }
}

double sqrt_weighted_mean(const std::vector<std::uint64_t>& histogram, std::uint64_t points) {
    double acc = 0.0;
    for (std::size_t k = 1; k < histogram.size(); ++k) {
        acc += static_cast<double>(histogram[k]) * std::sqrt(static_cast<double>(k));
    }
    return acc / static_cast<double>(points);
}

Rational max_of(const std::vector<Rational>& v) {
    return v.empty() ? Rational(0) : *std::max_element(v.begin(), v.end());
}

}  // namespace

std::uint64_t SensitivityProfile::sens_total() const {
    std::uint64_t t = 0;
    for (auto s : sens) t += s;
    return t;
}

std::uint64_t SensitivityProfile::neg_sens_total() const {
    std::uint64_t t = 0;
    for (auto s : neg_sens) t += s;
    return t;
}

std::vector<std::uint64_t> SensitivityProfile::histogram(bool directed) const {
    std::vector<std::uint64_t> h(arity + 1, 0);
    for (auto s : directed ? neg_sens : sens) ++h[s];
    return h;
}

EdgeCounts edge_counts(const BooleanFunction& f, unsigned i) {
    check_coordinate(f, i);
    EdgeCounts c;
    detail::for_each_edge_word(f, i, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
        c.sensitive += static_cast<std::uint64_t>(std::popcount(lo ^ hi));
        c.decreasing += static_cast<std::uint64_t>(std::popcount(lo & ~hi));
    });
    return c;
}

SensitivityProfile sensitivity_profile(const BooleanFunction& f) {
    const unsigned m = f.arity();
    SensitivityProfile p;
    p.arity = m;
    p.sens.assign(f.size(), 0);
    p.neg_sens.assign(f.size(), 0);
    for (unsigned i = 1; i <= m; ++i) {
        const std::uint64_t step = std::uint64_t{1} << (i - 1);
        detail::for_each_edge_word(f, i, [&](std::uint64_t w, std::uint64_t lo, std::uint64_t hi) {
            for_each_set_bit(lo ^ hi, w << 6, [&](std::uint64_t x) {
                ++p.sens[x];
                ++p.sens[x + step];
            });
            for_each_set_bit(lo & ~hi, w << 6, [&](std::uint64_t x) { ++p.neg_sens[x]; });
        });
    }
    return p;
}

Rational influence(const BooleanFunction& f, unsigned i) {
    // Each sensitive edge makes both endpoints sensitive.
    return Rational(static_cast<std::int64_t>(edge_counts(f, i).sensitive),
                    static_cast<std::int64_t>(f.size() / 2));
}

Rational negative_influence(const BooleanFunction& f, unsigned i) {
    return Rational(static_cast<std::int64_t>(edge_counts(f, i).decreasing),
                    static_cast<std::int64_t>(f.size() / 2));
}

Rational total_influence(const BooleanFunction& f) {
    std::uint64_t edges = 0;
    for (unsigned i = 1; i <= f.arity(); ++i) edges += edge_counts(f, i).sensitive;
    return Rational(static_cast<std::int64_t>(edges), static_cast<std::int64_t>(f.size() / 2));
}

double talagrand_functional(const SensitivityProfile& profile, bool directed) {
    return sqrt_weighted_mean(profile.histogram(directed), std::uint64_t{1} << profile.arity);
}

double talagrand_functional(const BooleanFunction& f, bool directed) {
    return talagrand_functional(sensitivity_profile(f), directed);
}

namespace {

double eg_from(const Rational& variance, const std::vector<Rational>& inf) {
    if (is_zero(variance)) return 0.0;
    double sum_sq = 0.0;
    for (const auto& r : inf) sum_sq += to_double(r) * to_double(r);
    // Var > 0 forces some influence to be positive, so sum_sq > 0.
    return to_double(variance) * std::sqrt(std::log(2.0 + std::numbers::e / sum_sq));
}

std::optional<double> kkl_from(const Rational& variance, const std::vector<Rational>& inf) {
    const auto m = inf.size();
    if (is_zero(variance) || m < 2) return std::nullopt;
    return to_double(max_of(inf)) * static_cast<double>(m) /
           (to_double(variance) * std::log(static_cast<double>(m)));
}

}  // namespace

double eldan_gross_rhs(const BooleanFunction& f) {
    std::vector<Rational> inf;
    for (unsigned i = 1; i <= f.arity(); ++i) inf.push_back(influence(f, i));
    return eg_from(mean_variance(f).variance, inf);
}

double kkl_witness_ratio(const BooleanFunction& f) {
    if (f.arity() < 2) throw UndefinedRatioError("KKL ratio needs arity >= 2");
    std::vector<Rational> inf;
    for (unsigned i = 1; i <= f.arity(); ++i) inf.push_back(influence(f, i));
    auto r = kkl_from(mean_variance(f).variance, inf);
    if (!r) throw UndefinedRatioError("KKL ratio undefined for a constant function");
    return *r;
}

InfluenceReport influence_report(const BooleanFunction& f, const SensitivityProfile& profile) {
    InfluenceReport r;
    const auto half = static_cast<std::int64_t>(f.size() / 2);
    std::uint64_t edges = 0;
    for (unsigned i = 1; i <= f.arity(); ++i) {
        const auto c = edge_counts(f, i);
        edges += c.sensitive;
        r.inf.emplace_back(static_cast<std::int64_t>(c.sensitive), half);
        r.neg_inf.emplace_back(static_cast<std::int64_t>(c.decreasing), half);
    }
    r.total_influence = Rational(static_cast<std::int64_t>(edges), half);
    r.variance = mean_variance(f).variance;
    r.talagrand = talagrand_functional(profile, false);
    r.directed_talagrand = talagrand_functional(profile, true);
    r.eg_rhs = eg_from(r.variance, r.inf);
    r.kkl_witness_ratio = kkl_from(r.variance, r.inf);
    return r;
}

InfluenceReport influence_report(const BooleanFunction& f) {
    return influence_report(f, sensitivity_profile(f));
}

const InequalityRow* InequalityReport::find(std::string_view name) const {
    for (const auto& row : rows) {
        if (row.name == name) return &row;
    }
    return nullptr;
}

namespace {

InequalityRow make_row(std::string name, double lhs, double rhs) {
    InequalityRow row{std::move(name), lhs, rhs, std::nullopt, std::nullopt, std::nullopt};
    if (rhs != 0.0) row.ratio = lhs / rhs;
    return row;
}

}  // namespace

InequalityReport inequality_report(const InfluenceReport& r, unsigned arity,
                                   std::optional<Rational> eps, bool directed) {
    if (directed && !eps) {
        throw ArgumentError("directed inequality ratios need the distance to monotonicity");
    }
    const double m = static_cast<double>(arity);
    const double log_m_over_m = arity >= 2 ? std::log(m) / m : 0.0;
    const double var = to_double(r.variance);

    InequalityReport out;
    auto poincare = make_row("poincare", to_double(r.total_influence), var);
    poincare.exact_lhs = r.total_influence;
    poincare.exact_rhs = r.variance;
    if (!is_zero(r.variance)) poincare.ratio = to_double(r.total_influence / r.variance);
    out.rows.push_back(std::move(poincare));
    out.rows.push_back(make_row("talagrand", r.talagrand, var));
    out.rows.push_back(make_row("kkl", to_double(max_of(r.inf)), var * log_m_over_m));
    out.rows.push_back(make_row("eldan_gross", r.talagrand, r.eg_rhs));
    if (directed) {
        const double e = to_double(*eps);
        out.rows.push_back(make_row("directed_talagrand", r.directed_talagrand, e));
        out.rows.push_back(make_row("directed_kkl", to_double(max_of(r.neg_inf)), e * log_m_over_m));
    }
    return out;
}

InequalityReport inequality_report(const BooleanFunction& f, std::optional<Rational> eps,
                                   bool directed) {
    return inequality_report(influence_report(f), f.arity(), eps, directed);
}

}  // namespace dirkkl
