#include "dirkkl/constructions.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <thread>

#include "dirkkl/errors.hpp"

namespace dirkkl {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw ArgumentError("uniform_below: empty range");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

namespace {

bool is_power_of_two(unsigned n) { return n >= 2 && std::has_single_bit(n); }

void check_tribe_count(unsigned n) {
    if (!is_power_of_two(n)) {
        throw ArgumentError("tribe count n = " + std::to_string(n) +
                            " must be a power of two >= 2");
    }
    if (n > kMaxSymbolicTribes) {
        throw CapacityError("tribes", "tribe count is limited to " +
                                          std::to_string(kMaxSymbolicTribes));
    }
}

bool tribe_fires(const std::vector<unsigned>& tribe, std::span<const std::uint64_t> x) {
    for (auto j : tribe) {
        if (((x[(j - 1) >> 6] >> ((j - 1) & 63)) & 1u) == 0) return false;
    }
    return true;
}

std::vector<std::uint64_t> tribe_masks(const TribesInstance& inst) {
    std::vector<std::uint64_t> masks;
    masks.reserve(inst.n);
    for (const auto& t : inst.tribes) {
        std::uint64_t mask = 0;
        for (auto j : t) mask |= std::uint64_t{1} << (j - 1);
        masks.push_back(mask);
    }
    return masks;
}

}  // namespace

TribesInstance TribesInstance::from_tribes(unsigned n, std::uint64_t seed,
                                           std::vector<std::vector<unsigned>> tribes) {
    check_tribe_count(n);
    const auto width = static_cast<unsigned>(std::countr_zero(n));
    if (tribes.size() != n) {
        throw ArgumentError("expected " + std::to_string(n) + " tribes, got " +
                            std::to_string(tribes.size()));
    }
    for (auto& t : tribes) {
        if (t.size() != width) {
            throw ArgumentError("every tribe must have " + std::to_string(width) + " members");
        }
        std::sort(t.begin(), t.end());
        if (std::adjacent_find(t.begin(), t.end()) != t.end()) {
            throw ArgumentError("tribe members must be distinct");
        }
        if (t.front() < 1 || t.back() > n) {
            throw ArgumentError("tribe members must lie in [1, " + std::to_string(n) + "]");
        }
    }
    return TribesInstance{n, width, seed, std::move(tribes)};
}

TribesInstance sample_counterexample(unsigned n, std::uint64_t seed) {
    check_tribe_count(n);
    const auto width = static_cast<unsigned>(std::countr_zero(n));
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates. The pool is not reset between tribes; the first
    // `width` slots are a uniform subset whatever order the pool is in.
    std::vector<unsigned> pool(n);
    std::iota(pool.begin(), pool.end(), 1u);
    std::vector<std::vector<unsigned>> tribes(n);
    for (auto& t : tribes) {
        for (unsigned j = 0; j < width; ++j) {
            const auto k = j + uniform_below(rng, n - j);
            std::swap(pool[j], pool[k]);
        }
        t.assign(pool.begin(), pool.begin() + width);
        std::sort(t.begin(), t.end());
    }
    return TribesInstance{n, width, seed, std::move(tribes)};
}

BooleanFunction instance_to_function(const TribesInstance& inst) {
    const unsigned n = inst.n;
    if (2 * n > kMaxArity) {
        throw CapacityError("arity", "materializing the counterexample needs arity " +
                                         std::to_string(2 * n) + " > " +
                                         std::to_string(kMaxArity));
    }
    // fired[x] has bit i-1 set when tribe i fires at x; f(x, y) = 1 iff some
    // fired tribe has y_i = 0.
    const auto masks = tribe_masks(inst);
    const std::uint64_t block = std::uint64_t{1} << n;
    std::vector<std::uint64_t> fired(block, 0);
    for (std::uint64_t x = 0; x < block; ++x) {
        for (unsigned i = 0; i < n; ++i) {
            if ((x & masks[i]) == masks[i]) fired[x] |= std::uint64_t{1} << i;
        }
    }
    return BooleanFunction::from_predicate(2 * n, [&](std::uint64_t ix) {
        return (fired[ix & (block - 1)] & ~(ix >> n)) != 0;
    });
}

std::vector<unsigned> fired_tribes(const TribesInstance& inst, std::span<const std::uint64_t> x) {
    if (x.size() * 64 < inst.n) throw ArgumentError("point has fewer than n coordinates");
    std::vector<unsigned> out;
    for (unsigned i = 0; i < inst.n; ++i) {
        if (tribe_fires(inst.tribes[i], x)) out.push_back(i + 1);
    }
    return out;
}

std::vector<unsigned> fired_tribes(const TribesInstance& inst, PointIndex x) {
    if (inst.n > 64) throw ArgumentError("PointIndex form needs n <= 64");
    const std::uint64_t w = x.value;
    return fired_tribes(inst, std::span<const std::uint64_t>(&w, 1));
}

Rational restricted_variance(unsigned k) {
    if (k > 30) throw ArgumentError("exact restricted variance needs k <= 30");
    const std::int64_t p = std::int64_t{1} << k;
    return Rational(p - 1, p * p);
}

double restricted_variance_value(unsigned k) {
    const double q = std::ldexp(1.0, -static_cast<int>(k));
    return (1.0 - q) * q;
}

Rational conditional_variance(const TribesInstance& inst, std::span<const std::uint64_t> x) {
    return restricted_variance(static_cast<unsigned>(fired_tribes(inst, x).size()));
}

Rational conditional_variance(const TribesInstance& inst, PointIndex x) {
    return restricted_variance(static_cast<unsigned>(fired_tribes(inst, x).size()));
}

FiringCounts firing_counts(const TribesInstance& inst) {
    if (inst.n > 24) throw CapacityError("firing_counts", "exact firing counts need n <= 24");
    const auto masks = tribe_masks(inst);
    FiringCounts c;
    c.by_count.assign(inst.n + 1, 0);
    c.per_tribe.assign(inst.n, 0);
    const std::uint64_t block = std::uint64_t{1} << inst.n;
    for (std::uint64_t x = 0; x < block; ++x) {
        unsigned k = 0;
        for (unsigned i = 0; i < inst.n; ++i) {
            if ((x & masks[i]) == masks[i]) {
                ++k;
                ++c.per_tribe[i];
            }
        }
        ++c.by_count[k];
    }
    return c;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

constexpr std::uint64_t kChunkSamples = std::uint64_t{1} << 14;

struct ChunkSums {
    std::vector<std::uint64_t> histogram;
    double var_sum = 0.0;
    double var_sq_sum = 0.0;
    std::vector<double> neg_sum;     // per tribe: sum of 2 * 2^-k over samples where it fires
    std::vector<double> neg_sq_sum;
};

ChunkSums run_chunk(const TribesInstance& inst, std::uint64_t count, std::uint64_t seed) {
    ChunkSums s;
    s.histogram.assign(inst.n + 1, 0);
    s.neg_sum.assign(inst.n, 0.0);
    s.neg_sq_sum.assign(inst.n, 0.0);
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> x((inst.n + 63) / 64);
    std::vector<unsigned> fired;
    for (std::uint64_t t = 0; t < count; ++t) {
        for (auto& w : x) w = rng();
        if (inst.n < 64) x[0] &= (std::uint64_t{1} << inst.n) - 1;
        fired.clear();
        for (unsigned i = 0; i < inst.n; ++i) {
            if (tribe_fires(inst.tribes[i], x)) fired.push_back(i);
        }
        const auto k = static_cast<unsigned>(fired.size());
        ++s.histogram[k];
        const double v = restricted_variance_value(k);
        s.var_sum += v;
        s.var_sq_sum += v * v;
        const double contribution = 2.0 * std::ldexp(1.0, -static_cast<int>(k));
        for (auto i : fired) {
            s.neg_sum[i] += contribution;
            s.neg_sq_sum[i] += contribution * contribution;
        }
    }
    return s;
}

Estimate from_sums(double sum, double sq_sum, std::uint64_t n) {
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    double var = n > 1 ? (sq_sum - nn * mean * mean) / (nn - 1.0) : 0.0;
    if (var < 0.0) var = 0.0;
    return {mean, std::sqrt(var / nn)};
}

Estimate bernoulli(std::uint64_t hits, std::uint64_t n) {
    const auto h = static_cast<double>(hits);
    return from_sums(h, h, n);
}

}  // namespace

SampledReport estimate_metrics(const TribesInstance& inst, std::uint64_t samples,
                               std::uint64_t seed, unsigned workers) {
    if (samples == 0) throw ArgumentError("sample budget must be at least 1");
    const std::uint64_t chunks = (samples + kChunkSamples - 1) / kChunkSamples;
    std::vector<ChunkSums> results(chunks);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));

    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            const std::uint64_t count = std::min(kChunkSamples, samples - c * kChunkSamples);
            results[c] = run_chunk(inst, count, seed ^ c);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }

    // Merge in chunk order so the floating-point sums do not depend on scheduling.
    SampledReport r;
    r.samples = samples;
    r.seed = seed;
    r.fired_histogram.assign(inst.n + 1, 0);
    double var_sum = 0.0, var_sq = 0.0;
    std::vector<double> neg_sum(inst.n, 0.0), neg_sq(inst.n, 0.0);
    for (const auto& c : results) {
        for (std::size_t k = 0; k < c.histogram.size(); ++k) r.fired_histogram[k] += c.histogram[k];
        var_sum += c.var_sum;
        var_sq += c.var_sq_sum;
        for (unsigned i = 0; i < inst.n; ++i) {
            neg_sum[i] += c.neg_sum[i];
            neg_sq[i] += c.neg_sq_sum[i];
        }
    }

    double k_sum = 0.0, k_sq = 0.0;
    for (std::size_t k = 0; k < r.fired_histogram.size(); ++k) {
        const auto h = static_cast<double>(r.fired_histogram[k]);
        k_sum += h * static_cast<double>(k);
        k_sq += h * static_cast<double>(k * k);
    }
    r.fired_mean = from_sums(k_sum, k_sq, samples);
    r.p_none = bernoulli(r.fired_histogram[0], samples);
    r.p_exactly_one = bernoulli(r.fired_histogram.size() > 1 ? r.fired_histogram[1] : 0, samples);
    r.p_at_least_two = bernoulli(samples - r.fired_histogram[0] -
                                     (r.fired_histogram.size() > 1 ? r.fired_histogram[1] : 0),
                                 samples);
    r.conditional_variance = from_sums(var_sum, var_sq, samples);
    r.neg_inf_y.reserve(inst.n);
    for (unsigned i = 0; i < inst.n; ++i) {
        r.neg_inf_y.push_back(from_sums(neg_sum[i], neg_sq[i], samples));
        if (i == 0 || r.neg_inf_y[i].mean > r.max_neg_inf_y.mean) r.max_neg_inf_y = r.neg_inf_y[i];
    }
    return r;
}

// ---------------------------------------------------------------------------
// Zoo

std::string to_string(ZooKind k) {
    switch (k) {
        case ZooKind::constant: return "constant";
        case ZooKind::dictator: return "dictator";
        case ZooKind::anti_dictator: return "anti_dictator";
        case ZooKind::parity: return "parity";
        case ZooKind::majority: return "majority";
        case ZooKind::tribes_bl: return "tribes_bl";
        case ZooKind::random: return "random";
    }
    return "?";
}

namespace {

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ArgumentError("parameter " + key + " expects a non-negative integer, got '" + text +
                            "'");
    }
    return v;
}

}  // namespace

ZooSpec ZooSpec::parse(const std::string& name, const std::map<std::string, std::string>& params) {
    static const std::map<std::string, std::pair<ZooKind, std::vector<std::string>>> kinds = {
        {"constant", {ZooKind::constant, {"m", "value"}}},
        {"dictator", {ZooKind::dictator, {"m", "i"}}},
        {"anti_dictator", {ZooKind::anti_dictator, {"m", "i"}}},
        {"parity", {ZooKind::parity, {"m"}}},
        {"majority", {ZooKind::majority, {"m"}}},
        {"tribes_bl", {ZooKind::tribes_bl, {"b", "s"}}},
        {"random", {ZooKind::random, {"m", "seed"}}},
    };
    const auto it = kinds.find(name);
    if (it == kinds.end()) throw ArgumentError("unknown zoo function '" + name + "'");
    const auto& [kind, allowed] = it->second;

    ZooSpec spec;
    spec.kind = kind;
    for (const auto& [key, text] : params) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ArgumentError("zoo function '" + name + "' takes no parameter '" + key + "'");
        }
        const auto v = parse_uint(key, text);
        if (key == "m") spec.arity = static_cast<unsigned>(std::min<std::uint64_t>(v, 1000));
        if (key == "i") spec.coordinate = static_cast<unsigned>(std::min<std::uint64_t>(v, 1000));
        if (key == "value") {
            if (v > 1) throw ArgumentError("constant value must be 0 or 1");
            spec.value = v == 1;
        }
        if (key == "b") spec.width = static_cast<unsigned>(std::min<std::uint64_t>(v, 1000));
        if (key == "s") spec.count = static_cast<unsigned>(std::min<std::uint64_t>(v, 1000));
        if (key == "seed") spec.seed = v;
    }
    for (const auto& key : allowed) {
        const bool optional = key == "value" || key == "i" || key == "seed";
        if (!optional && !params.contains(key)) {
            throw ArgumentError("zoo function '" + name + "' needs parameter '" + key + "'");
        }
    }
    return spec;
}

BooleanFunction zoo(const ZooSpec& spec) {
    const unsigned m = spec.kind == ZooKind::tribes_bl ? spec.width * spec.count : spec.arity;
    if (spec.kind == ZooKind::tribes_bl && (spec.width == 0 || spec.count == 0)) {
        throw ArgumentError("tribes_bl needs b >= 1 and s >= 1");
    }
    BooleanFunction::check_arity(m);
    switch (spec.kind) {
        case ZooKind::constant:
            return BooleanFunction::from_predicate(m, [&](std::uint64_t) { return spec.value; });
        case ZooKind::dictator:
        case ZooKind::anti_dictator: {
            if (spec.coordinate < 1 || spec.coordinate > m) {
                throw ArgumentError("coordinate " + std::to_string(spec.coordinate) +
                                    " out of range [1, " + std::to_string(m) + "]");
            }
            const bool anti = spec.kind == ZooKind::anti_dictator;
            const unsigned b = spec.coordinate - 1;
            return BooleanFunction::from_predicate(
                m, [&](std::uint64_t x) { return (((x >> b) & 1u) != 0) != anti; });
        }
        case ZooKind::parity:
            return BooleanFunction::from_predicate(
                m, [](std::uint64_t x) { return (std::popcount(x) & 1) != 0; });
        case ZooKind::majority:
            // Strict majority of ones; for even m a tie is 0.
            return BooleanFunction::from_predicate(m, [&](std::uint64_t x) {
                return 2u * static_cast<unsigned>(std::popcount(x)) > m;
            });
        case ZooKind::tribes_bl: {
            const std::uint64_t tribe = (std::uint64_t{1} << spec.width) - 1;
            return BooleanFunction::from_predicate(m, [&](std::uint64_t x) {
                for (unsigned t = 0; t < spec.count; ++t) {
                    if (((x >> (t * spec.width)) & tribe) == tribe) return true;
                }
                return false;
            });
        }
        case ZooKind::random: {
            std::mt19937_64 rng(spec.seed);
            std::vector<std::uint64_t> words(BooleanFunction::word_count(m));
            for (auto& w : words) w = rng();
            return BooleanFunction::from_words(m, std::move(words));
        }
    }
    throw ArgumentError("unhandled zoo kind");
}

}  // namespace dirkkl
