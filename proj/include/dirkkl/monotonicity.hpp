#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dirkkl/hypercube.hpp"
#include "dirkkl/rational.hpp"

namespace dirkkl {

inline constexpr unsigned kMaxMinCutArity = 20;
inline constexpr unsigned kMaxBruteForceArity = 5;
inline constexpr unsigned kMaxMatchingArity = 14;

// count[i-1] = #{x : x_i = 0, f(x) = 1, f(x^{(+)i}) = 0}.
std::vector<std::uint64_t> violated_edge_counts(const BooleanFunction& f);

enum class EpsMethod { mincut, bruteforce, bilinear_proxy };

std::string_view to_string(EpsMethod m);

struct EpsResult {
    Rational eps;
    std::uint64_t changed_points = 0;
    EpsMethod method = EpsMethod::mincut;
    std::optional<Rational> matching_lower_bound;
    // A closest monotone function g, with dist(f, g) = eps.
    std::optional<BooleanFunction> witness;
};

// Closure network for the cheapest up-set selection:
//   source -> x   capacity 1 when f(x) = 1
//   x -> sink     capacity 1 when f(x) = 0
//   x -> x^{(+)i} capacity 2^m + 1 when x_i = 0 (covering pairs)
// A finite cut with source side {s} + U costs |{f=1} \ U| + |{f=0} & U| and
// forces U to be up-closed. Arcs are implicit in the hypercube structure;
// only flows are stored.
class FlowNetwork {
public:
    explicit FlowNetwork(BooleanFunction f);

    std::uint64_t node_count() const noexcept { return f_.size() + 2; }
    std::uint64_t covering_arc_count() const noexcept {
        return std::uint64_t{f_.arity()} * (f_.size() / 2);
    }
    std::int64_t infinite_capacity() const noexcept {
        return static_cast<std::int64_t>(f_.size()) + 1;
    }

    // Dinic's algorithm; idempotent after the first call.
    std::uint64_t max_flow();

    // Points reachable from the source in the residual network after
    // max_flow(). This is the smallest source side among all minimum cuts.
    BooleanFunction min_cut_upset();

    // |{f=1} \ U| + |{f=0} & U| for the set U given as an indicator.
    std::uint64_t cut_value(const BooleanFunction& upset) const;

private:
    std::size_t arc(std::uint64_t lower, unsigned bit) const noexcept;
    bool residual(std::uint64_t from, unsigned bit) const noexcept;
    std::int32_t build_levels();
    bool augment_from(std::uint64_t start, std::int32_t sink_level);

    BooleanFunction f_;
    std::vector<std::int32_t> flow_;  // per covering arc
    std::vector<std::uint8_t> source_used_;
    std::vector<std::uint8_t> sink_used_;
    std::vector<std::int32_t> level_;
    std::vector<std::uint8_t> cursor_;
    std::uint64_t value_ = 0;
    bool solved_ = false;
};

// Minimum-cut computation of the distance to monotonicity, with the minimal
// optimal repair as witness. Arity above kMaxMinCutArity is a CapacityError.
EpsResult distance_to_monotone_exact(const BooleanFunction& f);

// Minimum over every monotone function; arity at most kMaxBruteForceArity.
EpsResult distance_to_monotone_bruteforce(const BooleanFunction& f);

// Truth tables (bit ix = g(ix)) of all monotone functions of the given arity,
// m <= 5. Counts are the Dedekind numbers 3, 6, 20, 168, 7581.
std::vector<std::uint32_t> monotone_tables(unsigned arity);

// Bipartite graph on f^{-1}(1) x f^{-1}(0) with an edge x -> y whenever
// x < y coordinatewise.
class ViolationGraph {
public:
    explicit ViolationGraph(const BooleanFunction& f);

    const std::vector<std::uint32_t>& left() const noexcept { return left_; }
    const std::vector<std::uint32_t>& right() const noexcept { return right_; }
    std::uint64_t edge_count() const noexcept { return targets_.size(); }
    bool empty() const noexcept { return targets_.empty(); }

    // Neighbours (indices into right()) of left node k.
    std::span<const std::uint32_t> neighbours(std::size_t k) const noexcept {
        return {targets_.data() + offsets_[k], targets_.data() + offsets_[k + 1]};
    }

    // Hopcroft-Karp.
    std::uint64_t maximum_matching() const;

private:
    std::vector<std::uint32_t> left_;
    std::vector<std::uint32_t> right_;
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> targets_;
};

// Every repair changes an endpoint of each matched violated pair, so
// matching / 2^m <= eps. Arity at most kMaxMatchingArity.
Rational matching_lower_bound(const BooleanFunction& f);

// E_x[Var_y f(x, y)] for f on 2n coordinates with x = coordinates 1..n and
// y = n+1..2n. f must be monotone in x and anti-monotone in y; anything else
// is a StructureError.
Rational bilinear_variance(const BooleanFunction& f, unsigned n);

}  // namespace dirkkl
