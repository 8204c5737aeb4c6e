#include "dirkkl/monotonicity.hpp"

#include <bit>
#include <limits>
#include <queue>
#include <stdexcept>

#include "dirkkl/errors.hpp"
#include "dirkkl/iso_metrics.hpp"

namespace dirkkl {

std::vector<std::uint64_t> violated_edge_counts(const BooleanFunction& f) {
    std::vector<std::uint64_t> out;
    out.reserve(f.arity());
    for (unsigned i = 1; i <= f.arity(); ++i) out.push_back(edge_counts(f, i).decreasing);
    return out;
}

std::string_view to_string(EpsMethod m) {
    switch (m) {
        case EpsMethod::mincut: return "mincut";
        case EpsMethod::bruteforce: return "bruteforce";
        case EpsMethod::bilinear_proxy: return "bilinear-proxy";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// FlowNetwork

FlowNetwork::FlowNetwork(BooleanFunction f)
    : f_(std::move(f)),
      flow_(covering_arc_count(), 0),
      source_used_(f_.size(), 0),
      sink_used_(f_.size(), 0),
      level_(f_.size(), -1),
      cursor_(f_.size(), 0) {}

std::size_t FlowNetwork::arc(std::uint64_t lower, unsigned bit) const noexcept {
    const std::uint64_t low_mask = (std::uint64_t{1} << bit) - 1;
    const std::uint64_t squeezed = ((lower >> (bit + 1)) << bit) | (lower & low_mask);
    return static_cast<std::size_t>(bit) * (f_.size() / 2) + squeezed;
}

// Residual capacity on the move from `from` across coordinate bit+1.
bool FlowNetwork::residual(std::uint64_t from, unsigned bit) const noexcept {
    const std::uint64_t step = std::uint64_t{1} << bit;
    if ((from & step) == 0) return flow_[arc(from, bit)] < infinite_capacity();
    return flow_[arc(from ^ step, bit)] > 0;
}

// BFS over the residual network. Returns the sink's level, or -1.
std::int32_t FlowNetwork::build_levels() {
    const std::uint64_t n = f_.size();
    const unsigned m = f_.arity();
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::uint32_t> frontier;
    for (std::uint64_t x = 0; x < n; ++x) {
        if (f_[x] && !source_used_[x]) {
            level_[x] = 1;
            frontier.push_back(static_cast<std::uint32_t>(x));
        }
    }
    std::int32_t depth = 1;
    std::vector<std::uint32_t> next;
    while (!frontier.empty()) {
        for (auto v : frontier) {
            if (!f_[v] && !sink_used_[v]) return depth + 1;
        }
        next.clear();
        for (auto v : frontier) {
            for (unsigned b = 0; b < m; ++b) {
                const std::uint64_t w = v ^ (std::uint64_t{1} << b);
                if (level_[w] < 0 && residual(v, b)) {
                    level_[w] = depth + 1;
                    next.push_back(static_cast<std::uint32_t>(w));
                }
            }
        }
        frontier.swap(next);
        ++depth;
    }
    return -1;
}

// One unit along a shortest path from `start`, if the level graph has one.
bool FlowNetwork::augment_from(std::uint64_t start, std::int32_t sink_level) {
    const unsigned m = f_.arity();
    std::vector<std::uint64_t> path{start};
    while (!path.empty()) {
        const std::uint64_t v = path.back();
        if (level_[v] == sink_level - 1 && !f_[v] && !sink_used_[v]) {
            sink_used_[v] = 1;
            source_used_[start] = 1;
            for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                const unsigned b = cursor_[path[k]];
                const std::uint64_t u = path[k];
                if ((u >> b) & 1u) {
                    --flow_[arc(u ^ (std::uint64_t{1} << b), b)];
                } else {
                    ++flow_[arc(u, b)];
                }
            }
            return true;
        }
        bool advanced = false;
        if (level_[v] < sink_level - 1) {
            for (; cursor_[v] < m; ++cursor_[v]) {
                const unsigned b = cursor_[v];
                const std::uint64_t w = v ^ (std::uint64_t{1} << b);
                if (level_[w] == level_[v] + 1 && residual(v, b)) {
                    path.push_back(w);
                    advanced = true;
                    break;
                }
            }
        }
        if (!advanced) {
            level_[v] = -1;  // dead end for this phase
            path.pop_back();
            if (!path.empty()) ++cursor_[path.back()];
        }
    }
    return false;
}

std::uint64_t FlowNetwork::max_flow() {
    if (solved_) return value_;
    for (;;) {
        const std::int32_t sink_level = build_levels();
        if (sink_level < 0) break;
        std::fill(cursor_.begin(), cursor_.end(), 0);
        for (std::uint64_t x = 0; x < f_.size(); ++x) {
            if (level_[x] == 1 && f_[x] && !source_used_[x] && augment_from(x, sink_level)) {
                ++value_;
            }
        }
    }
    solved_ = true;
    return value_;
}

BooleanFunction FlowNetwork::min_cut_upset() {
    max_flow();
    const unsigned m = f_.arity();
    std::vector<std::uint8_t> seen(f_.size(), 0);
    std::vector<std::uint64_t> stack;
    for (std::uint64_t x = 0; x < f_.size(); ++x) {
        if (f_[x] && !source_used_[x]) {
            seen[x] = 1;
            stack.push_back(x);
        }
    }
    while (!stack.empty()) {
        const std::uint64_t v = stack.back();
        stack.pop_back();
        for (unsigned b = 0; b < m; ++b) {
            const std::uint64_t w = v ^ (std::uint64_t{1} << b);
            if (!seen[w] && residual(v, b)) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return BooleanFunction::from_predicate(m, [&](std::uint64_t x) { return seen[x] != 0; });
}

std::uint64_t FlowNetwork::cut_value(const BooleanFunction& upset) const {
    return hamming_distance(f_, upset);
}

// ---------------------------------------------------------------------------

EpsResult distance_to_monotone_exact(const BooleanFunction& f) {
    if (f.arity() > kMaxMinCutArity) {
        throw CapacityError("mincut", "exact distance to monotonicity is limited to arity " +
                                          std::to_string(kMaxMinCutArity) +
                                          "; use the sampled bilinear-variance estimate");
    }
    FlowNetwork net(f);
    const std::uint64_t cut = net.max_flow();
    BooleanFunction g = net.min_cut_upset();
    if (net.cut_value(g) != cut || !is_monotone(g)) {
        throw std::logic_error("min-cut repair failed its certificate check");
    }
    EpsResult r;
    r.eps = dyadic(static_cast<std::int64_t>(cut), f.arity());
    r.changed_points = cut;
    r.method = EpsMethod::mincut;
    r.witness = std::move(g);
    return r;
}

std::vector<std::uint32_t> monotone_tables(unsigned arity) {
    if (arity > kMaxBruteForceArity) {
        throw CapacityError("bruteforce", "monotone enumeration is limited to arity " +
                                              std::to_string(kMaxBruteForceArity));
    }
    // Arity 0: the two constants. Each step splits on the new top coordinate:
    // g = (lower half, upper half) with lower <= upper pointwise.
    std::vector<std::uint32_t> tables{0u, 1u};
    for (unsigned k = 1; k <= arity; ++k) {
        const unsigned half = 1u << (k - 1);
        std::vector<std::uint32_t> next;
        for (auto lo : tables) {
            for (auto hi : tables) {
                if ((lo & ~hi) == 0) next.push_back(lo | (hi << half));
            }
        }
        tables.swap(next);
    }
    return tables;
}

EpsResult distance_to_monotone_bruteforce(const BooleanFunction& f) {
    const auto tables = monotone_tables(f.arity());
    const auto table = static_cast<std::uint32_t>(f.words()[0]);
    std::uint32_t best = tables.front();
    int best_distance = std::numeric_limits<int>::max();
    for (auto g : tables) {
        const int d = std::popcount(table ^ g);
        if (d < best_distance) {
            best_distance = d;
            best = g;
        }
    }
    EpsResult r;
    r.eps = dyadic(best_distance, f.arity());
    r.changed_points = static_cast<std::uint64_t>(best_distance);
    r.method = EpsMethod::bruteforce;
    r.witness = BooleanFunction::from_words(f.arity(), {best});
    return r;
}

// ---------------------------------------------------------------------------
// ViolationGraph

ViolationGraph::ViolationGraph(const BooleanFunction& f) {
    if (f.arity() > kMaxMatchingArity) {
        throw CapacityError("matching", "violation graph is limited to arity " +
                                            std::to_string(kMaxMatchingArity));
    }
    const std::uint64_t n = f.size();
    std::vector<std::uint32_t> right_index(n, 0);
    for (std::uint64_t x = 0; x < n; ++x) {
        if (f[x]) {
            left_.push_back(static_cast<std::uint32_t>(x));
        } else {
            right_index[x] = static_cast<std::uint32_t>(right_.size());
            right_.push_back(static_cast<std::uint32_t>(x));
        }
    }
    const std::uint64_t full = n - 1;
    offsets_.reserve(left_.size() + 1);
    offsets_.push_back(0);
    for (auto x : left_) {
        const std::uint64_t free = full & ~std::uint64_t{x};
        // Every nonempty submask s of the free coordinates gives y = x | s > x.
        for (std::uint64_t s = free; s != 0; s = (s - 1) & free) {
            const std::uint64_t y = x | s;
            if (!f[y]) targets_.push_back(right_index[y]);
        }
        offsets_.push_back(targets_.size());
    }
}

std::uint64_t ViolationGraph::maximum_matching() const {
    constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();
    constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
    const std::size_t nl = left_.size();
    std::vector<std::uint32_t> match_left(nl, kFree);
    std::vector<std::uint32_t> match_right(right_.size(), kFree);
    std::vector<std::uint32_t> dist(nl, kInf);
    std::vector<std::size_t> cursor(nl, 0);

    auto bfs = [&]() {
        std::queue<std::uint32_t> q;
        for (std::uint32_t u = 0; u < nl; ++u) {
            if (match_left[u] == kFree) {
                dist[u] = 0;
                q.push(u);
            } else {
                dist[u] = kInf;
            }
        }
        bool found = false;
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto v : neighbours(u)) {
                const auto w = match_right[v];
                if (w == kFree) {
                    found = true;
                } else if (dist[w] == kInf) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    };

    auto dfs = [&](auto&& self, std::uint32_t u) -> bool {
        const auto adj = neighbours(u);
        for (; cursor[u] < adj.size(); ++cursor[u]) {
            const auto v = adj[cursor[u]];
            const auto w = match_right[v];
            if (w == kFree || (dist[w] == dist[u] + 1 && self(self, w))) {
                match_left[u] = v;
                match_right[v] = u;
                return true;
            }
        }
        dist[u] = kInf;
        return false;
    };

    std::uint64_t matching = 0;
    while (bfs()) {
        std::fill(cursor.begin(), cursor.end(), 0);
        for (std::uint32_t u = 0; u < nl; ++u) {
            if (match_left[u] == kFree && dfs(dfs, u)) ++matching;
        }
    }
    return matching;
}

Rational matching_lower_bound(const BooleanFunction& f) {
    const ViolationGraph g(f);
    return dyadic(static_cast<std::int64_t>(g.maximum_matching()), f.arity());
}

// ---------------------------------------------------------------------------

Rational bilinear_variance(const BooleanFunction& f, unsigned n) {
    if (n == 0 || f.arity() != 2 * n) {
        throw StructureError("bilinear variance needs arity 2n; got arity " +
                             std::to_string(f.arity()) + " with n = " + std::to_string(n));
    }
    for (unsigned i = 1; i <= 2 * n; ++i) {
        const auto d = monotone_direction(f, i);
        const bool ok = d == Direction::both ||
                        (i <= n ? d == Direction::increasing : d == Direction::decreasing);
        if (!ok) {
            throw StructureError("coordinate " + std::to_string(i) + " is " +
                                 std::string(to_string(d)) + "; expected " +
                                 (i <= n ? "monotone" : "anti-monotone"));
        }
    }
    // ones[x] = |{y : f(x, y) = 1}|; point index is x + 2^n y.
    const std::uint64_t block = std::uint64_t{1} << n;
    std::vector<std::int64_t> ones(block, 0);
    const auto words = f.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        for (std::uint64_t bits = words[w]; bits != 0; bits &= bits - 1) {
            const std::uint64_t ix = (w << 6) + static_cast<std::uint64_t>(std::countr_zero(bits));
            ++ones[ix & (block - 1)];
        }
    }
    const auto b = static_cast<std::int64_t>(block);
    std::int64_t acc = 0;
    for (auto c : ones) acc += c * (b - c);
    // sum_x c (2^n - c) / 4^n, averaged over 2^n values of x.
    return dyadic(acc, 3 * n);
}

}  // namespace dirkkl
