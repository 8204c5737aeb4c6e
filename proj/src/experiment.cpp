#include "dirkkl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dirkkl/errors.hpp"

namespace dirkkl::experiment {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::map<std::string, std::string> parse_pairs(const std::vector<std::string>& tokens,
                                               std::size_t first) {
    std::map<std::string, std::string> out;
    for (std::size_t k = first; k < tokens.size(); ++k) {
        const auto& tok = tokens[k];
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ArgumentError("expected key=value, got '" + tok + "'");
        }
        if (!out.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second) {
            throw ArgumentError("repeated key in '" + tok + "'");
        }
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        if (text.empty() || text.front() == '-') throw std::invalid_argument(text);
        const auto v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("'" + key + "=" + text + "' is not a non-negative integer");
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

json make_record(std::string command, json parameters, json results, Clock::time_point start,
                 const Options& opt) {
    json r = {
        {"command", std::move(command)},
        {"parameters", std::move(parameters)},
        {"results", std::move(results)},
        {"version", std::string(kVersion)},
    };
    if (opt.timing) r["wall_time_ms"] = elapsed_ms(start);
    return r;
}

std::optional<double> directed_kkl_ratio(double max_neg_inf, double eps, unsigned m) {
    if (eps <= 0.0 || m < 2) return std::nullopt;
    return max_neg_inf * m / (eps * std::log(static_cast<double>(m)));
}

}  // namespace

FunctionSpec parse_function_spec(std::string_view text) {
    FunctionSpec spec;
    spec.text = std::string(text);
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ArgumentError("unrecognized function spec '" + spec.text +
                            "' (expected zoo:, file: or tribes-ce:)");
    }
    const auto prefix = text.substr(0, colon);
    const auto rest = text.substr(colon + 1);
    if (prefix == "zoo") {
        const auto tokens = split(rest, ',');
        spec.kind = FunctionSpec::Kind::zoo;
        spec.zoo = ZooSpec::parse(tokens.front(), parse_pairs(tokens, 1));
    } else if (prefix == "file") {
        if (rest.empty()) throw ArgumentError("file: spec needs a path");
        spec.kind = FunctionSpec::Kind::file;
        spec.path = std::string(rest);
    } else if (prefix == "tribes-ce") {
        const auto pairs = parse_pairs(split(rest, ','), 0);
        for (const auto& [k, v] : pairs) {
            if (k != "n" && k != "seed") throw ArgumentError("unknown tribes-ce key '" + k + "'");
        }
        if (!pairs.contains("n") || !pairs.contains("seed")) {
            throw ArgumentError("tribes-ce spec needs n=<int> and seed=<int>");
        }
        spec.kind = FunctionSpec::Kind::tribes;
        const auto n = parse_u64("n", pairs.at("n"));
        if (n > kMaxSymbolicTribes) throw ArgumentError("'n=" + pairs.at("n") + "' is too large");
        spec.n = static_cast<unsigned>(n);
        spec.seed = parse_u64("seed", pairs.at("seed"));
    } else {
        throw ArgumentError("unrecognized function spec prefix '" + std::string(prefix) + "'");
    }
    return spec;
}

ResolvedFunction resolve(const FunctionSpec& spec, bool materialize) {
    ResolvedFunction r;
    r.label = spec.text;
    switch (spec.kind) {
        case FunctionSpec::Kind::zoo:
            r.function = zoo(spec.zoo);
            break;
        case FunctionSpec::Kind::file: {
            auto loaded = load_function_file(spec.path);
            if (auto* f = std::get_if<BooleanFunction>(&loaded)) {
                r.function = std::move(*f);
            } else {
                r.tribes = std::get<TribesInstance>(std::move(loaded));
            }
            break;
        }
        case FunctionSpec::Kind::tribes:
            r.tribes = sample_counterexample(spec.n, spec.seed);
            break;
    }
    if (materialize && r.tribes && !r.function) r.function = instance_to_function(*r.tribes);
    return r;
}

// ---------------------------------------------------------------------------
// analyze

json analyze(const FunctionSpec& spec, const Options& opt) {
    const auto start = Clock::now();
    const auto fn = resolve(spec);
    const BooleanFunction& f = *fn.function;
    const unsigned m = f.arity();

    const auto profile = sensitivity_profile(f);
    const auto rep = influence_report(f, profile);

    json results;
    results["arity"] = m;
    results["influence"] = to_json(rep);
    results["sensitivity"] = profile_summary(profile);

    std::optional<Rational> eps;
    if (opt.with_eps && m <= kMaxMinCutArity) {
        auto e = distance_to_monotone_exact(f);
        if (m <= kMaxMatchingArity) e.matching_lower_bound = matching_lower_bound(f);
        eps = e.eps;
        results["eps"] = to_json(e);
        if (opt.witness && m <= kMaxJsonBitsArity) results["witness"] = truth_table_json(*e.witness);
    } else {
        results["eps"] = nullptr;
        results["eps_skipped"] = opt.with_eps ? "arity " + std::to_string(m) +
                                                    " above the min-cut guard (" +
                                                    std::to_string(kMaxMinCutArity) + ")"
                                              : std::string("disabled");
    }
    results["inequalities"] = to_json(inequality_report(rep, m, eps, eps.has_value()));
    if (fn.tribes) {
        results["tribes"] = to_json(*fn.tribes);
        results["bilinear_variance"] = to_json(bilinear_variance(f, fn.tribes->n));
    }
    return make_record("analyze", {{"spec", spec.text}}, std::move(results), start, opt);
}

// ---------------------------------------------------------------------------
// counterexample

std::uint64_t sampling_seed(std::uint64_t instance_seed) {
    return instance_seed ^ 0x9E3779B97F4A7C15ULL;
}

CounterexampleRow counterexample_row(const TribesInstance& inst, const Options& opt) {
    CounterexampleRow row;
    row.n = inst.n;
    row.seed = inst.seed;
    row.max_neg_inf_first_block = Rational(0);
    if (inst.n <= kMaxExactTribes) {
        const auto f = instance_to_function(inst);
        Rational second(0);
        for (unsigned i = 1; i <= 2 * inst.n; ++i) {
            const auto r = negative_influence(f, i);
            if (i <= inst.n) {
                row.max_neg_inf_first_block = std::max(row.max_neg_inf_first_block, r);
            } else {
                second = std::max(second, r);
            }
        }
        const auto e = distance_to_monotone_exact(f);
        const auto bv = bilinear_variance(f, inst.n);
        row.method = EpsMethod::mincut;
        row.exact_max_neg_inf_second_block = second;
        row.max_neg_inf_second_block = to_double(second);
        row.exact_eps = e.eps;
        row.eps = to_double(e.eps);
        row.exact_bilinear_variance = bv;
        row.bilinear_variance = to_double(bv);
    } else {
        // f is monotone in x for every layout, so the first block stays exactly zero.
        const auto est = estimate_metrics(inst, opt.samples, sampling_seed(inst.seed), opt.workers);
        row.method = EpsMethod::bilinear_proxy;
        row.max_neg_inf_second_block = est.max_neg_inf_y.mean;
        row.bilinear_variance = est.conditional_variance.mean;
        row.bilinear_variance_std_error = est.conditional_variance.std_error;
        row.eps = kProxyScale * row.bilinear_variance;
    }
    const double max_neg =
        std::max(to_double(row.max_neg_inf_first_block), row.max_neg_inf_second_block);
    row.ratio = directed_kkl_ratio(max_neg, row.eps, 2 * inst.n);
    return row;
}

std::vector<CounterexampleRow> counterexample_rows(unsigned n, std::uint64_t base_seed,
                                                   unsigned seed_count, const Options& opt) {
    std::vector<CounterexampleRow> rows;
    rows.reserve(seed_count);
    for (unsigned k = 0; k < seed_count; ++k) {
        rows.push_back(counterexample_row(sample_counterexample(n, base_seed + k), opt));
    }
    return rows;
}

namespace {

json row_json(const CounterexampleRow& r) {
    json j = {
        {"seed", r.seed},
        {"method", std::string(to_string(r.method))},
        {"max_neg_inf_first_block", to_json(r.max_neg_inf_first_block)},
        {"reference_one_over_n", to_json(Rational(1, r.n))},
        {"directed_kkl_ratio", to_json(r.ratio)},
    };
    if (r.exact_eps) {
        j["max_neg_inf_second_block"] = to_json(*r.exact_max_neg_inf_second_block);
        j["eps"] = to_json(*r.exact_eps);
        j["bilinear_variance"] = to_json(*r.exact_bilinear_variance);
    } else {
        j["max_neg_inf_second_block"] = r.max_neg_inf_second_block;
        j["eps"] = r.eps;
        j["proxy_scale"] = kProxyScale;
        j["bilinear_variance"] = {{"mean", r.bilinear_variance},
                                  {"std_error", r.bilinear_variance_std_error}};
    }
    return j;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto k = v.size();
    return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

}  // namespace

json counterexample(unsigned n, std::uint64_t base_seed, unsigned seed_count, const Options& opt) {
    const auto start = Clock::now();
    if (seed_count == 0) throw ArgumentError("--seeds must be at least 1");
    const auto rows = counterexample_rows(n, base_seed, seed_count, opt);
    json table = json::array();
    std::vector<double> eps, ratios;
    Rational max_first(0);
    double max_second = 0.0;
    for (const auto& r : rows) {
        table.push_back(row_json(r));
        eps.push_back(r.eps);
        if (r.ratio) ratios.push_back(*r.ratio);
        max_first = std::max(max_first, r.max_neg_inf_first_block);
        max_second = std::max(max_second, r.max_neg_inf_second_block);
    }
    json summary = {
        {"max_neg_inf_first_block", to_json(max_first)},
        {"max_neg_inf_second_block", max_second},
        {"reference_one_over_n", 1.0 / n},
        {"median_eps", median(eps)},
        {"median_directed_kkl_ratio", ratios.empty() ? json(nullptr) : json(median(ratios))},
    };
    json params = {{"n", n}, {"seed", base_seed}, {"seeds", seed_count}};
    if (n > kMaxExactTribes) params["samples"] = opt.samples;
    return make_record("counterexample", std::move(params),
                       {{"rows", std::move(table)}, {"summary", std::move(summary)}}, start, opt);
}

std::string counterexample_csv(const std::vector<CounterexampleRow>& rows) {
    std::ostringstream out;
    out << "n,seed,method,max_neg_inf_first_block,max_neg_inf_second_block,reference,eps,"
           "bilinear_variance,ratio\n";
    for (const auto& r : rows) {
        out << r.n << ',' << r.seed << ',' << to_string(r.method) << ','
            << fmt(to_double(r.max_neg_inf_first_block)) << ',' << fmt(r.max_neg_inf_second_block)
            << ',' << fmt(1.0 / r.n) << ',' << fmt(r.eps) << ',' << fmt(r.bilinear_variance) << ','
            << (r.ratio ? fmt(*r.ratio) : "undefined") << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// sweep

SweepRow sweep_row(const ResolvedFunction& fn) {
    if (!fn.function) throw ArgumentError("'" + fn.label + "' has no truth table");
    const auto& f = *fn.function;
    Rational max_neg(0);
    for (unsigned i = 1; i <= f.arity(); ++i) max_neg = std::max(max_neg, negative_influence(f, i));
    const auto e = distance_to_monotone_exact(f);
    SweepRow row;
    row.n = fn.label;
    row.method = std::string(to_string(e.method));
    row.max_neg_inf = to_double(max_neg);
    row.eps_or_proxy = to_double(e.eps);
    row.ratio = directed_kkl_ratio(row.max_neg_inf, row.eps_or_proxy, f.arity());
    return row;
}

std::vector<SweepRow> sweep(const std::vector<unsigned>& ns, std::uint64_t base_seed,
                            unsigned seed_count, const std::vector<FunctionSpec>& injected,
                            const Options& opt) {
    std::vector<SweepRow> out;
    for (auto n : ns) {
        for (const auto& r : counterexample_rows(n, base_seed, seed_count, opt)) {
            SweepRow row;
            row.n = std::to_string(r.n);
            row.seed = std::to_string(r.seed);
            row.method = std::string(to_string(r.method));
            row.max_neg_inf =
                std::max(to_double(r.max_neg_inf_first_block), r.max_neg_inf_second_block);
            row.eps_or_proxy = r.eps;
            row.ratio = r.ratio;
            out.push_back(std::move(row));
        }
    }
    for (const auto& spec : injected) out.push_back(sweep_row(resolve(spec)));
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "n,seed,method,max_neg_inf,eps_or_proxy,ratio\n";
    for (const auto& r : rows) {
        out << csv_field(r.n) << ',' << r.seed << ',' << r.method << ',' << fmt(r.max_neg_inf)
            << ',' << fmt(r.eps_or_proxy) << ',' << (r.ratio ? fmt(*r.ratio) : "undefined")
            << '\n';
    }
    return out.str();
}

std::optional<double> median_ratio(const std::vector<SweepRow>& rows, const std::string& n) {
    std::vector<double> v;
    for (const auto& r : rows) {
        if (r.n == n && r.ratio) v.push_back(*r.ratio);
    }
    if (v.empty()) return std::nullopt;
    return median(std::move(v));
}

// ---------------------------------------------------------------------------
// verify

const std::map<std::string, std::map<std::string, double>>& builtin_baselines() {
    // Minimum ratios over every function of the given arity, frozen from the
    // first verified run. Ratios are undefined (and skipped) for constants
    // and, in the directed rows, for monotone functions.
    static const std::map<std::string, std::map<std::string, double>> table = {
        {"exhaustive:m=1",
         {{"directed_talagrand", 1.0},
          {"eldan_gross", 3.2113810425964897},
          {"poincare", 4.0},
          {"talagrand", 4.0}}},
        {"exhaustive:m=2",
         {{"directed_kkl", 5.7707801635558535},
          {"directed_talagrand", 1.0},
          {"eldan_gross", 3.2113810425964897},
          {"kkl", 7.694373551407805},
          {"poincare", 4.0},
          {"talagrand", 4.0}}},
        {"exhaustive:m=3",
         {{"directed_kkl", 2.7307176798805117},
          {"directed_talagrand", 1.0},
          {"eldan_gross", 3.2113810425964897},
          {"kkl", 5.4614353597610235},
          {"poincare", 4.0},
          {"talagrand", 4.0}}},
        {"exhaustive:m=4",
         {{"directed_kkl", 2.3083120654223412},
          {"directed_talagrand", 1.0},
          {"eldan_gross", 3.2113810425964897},
          {"kkl", 4.396784886518746},
          {"poincare", 4.0},
          {"talagrand", 4.0}}},
    };
    return table;
}

namespace {

struct Minimum {
    double ratio = 0.0;
    std::string witness;
    std::uint64_t defined = 0;
};

using Minima = std::map<std::string, Minimum>;

void record(Minima& minima, const InequalityReport& rep, const std::string& label) {
    for (const auto& row : rep.rows) {
        if (!row.ratio) continue;
        auto& m = minima[row.name];
        if (m.defined == 0 || *row.ratio < m.ratio) {
            m.ratio = *row.ratio;
            m.witness = label;
        }
        ++m.defined;
    }
}

json minima_json(const Minima& minima) {
    json j = json::object();
    for (const auto& [name, m] : minima) {
        j[name] = {{"min_ratio", m.ratio}, {"witness", m.witness}, {"defined", m.defined}};
    }
    return j;
}

}  // namespace

VerifyResult verify(const Corpus& corpus) {
    VerifyResult result;
    std::map<std::string, Minima> per_source;
    Minima overall;
    std::uint64_t functions = 0;
    json poincare_violations = json::array();

    auto check = [&](const std::string& source, const BooleanFunction& f, const std::string& label) {
        const auto rep = influence_report(f);
        if (rep.total_influence < rep.variance) poincare_violations.push_back(label);
        std::optional<Rational> eps;
        if (f.arity() <= kMaxMinCutArity) eps = distance_to_monotone_exact(f).eps;
        const auto ineq = inequality_report(rep, f.arity(), eps, eps.has_value());
        record(per_source[source], ineq, label);
        record(overall, ineq, label);
        ++functions;
    };

    for (auto m : corpus.exhaustive) {
        if (m < 1 || m > 4) throw ArgumentError("exhaustive corpus needs 1 <= m <= 4");
        const std::string source = "exhaustive:m=" + std::to_string(m);
        const std::uint64_t count = std::uint64_t{1} << (1u << m);
        for (std::uint64_t t = 0; t < count; ++t) {
            check(source, BooleanFunction::from_words(m, {t}),
                  source + ",bits=" + BooleanFunction::from_words(m, {t}).to_bit_string());
        }
    }
    for (const auto& spec : corpus.named) {
        const auto fn = resolve(spec);
        check("named", *fn.function, fn.label);
    }
    if (corpus.random_count > 0) {
        const std::string source = "random:m=" + std::to_string(corpus.random_arity) +
                                   ",seed=" + std::to_string(corpus.seed) +
                                   ",count=" + std::to_string(corpus.random_count);
        for (unsigned k = 0; k < corpus.random_count; ++k) {
            const auto spec = parse_function_spec("zoo:random,m=" + std::to_string(corpus.random_arity) +
                                                  ",seed=" + std::to_string(corpus.seed + k));
            check(source, zoo(spec.zoo), spec.text);
        }
    }

    auto baselines = builtin_baselines();
    for (const auto& [source, entries] : corpus.baselines) {
        for (const auto& [name, value] : entries) baselines[source][name] = value;
    }
    json checks = json::array();
    for (const auto& [source, minima] : per_source) {
        const auto b = baselines.find(source);
        if (b == baselines.end()) continue;
        for (const auto& [name, floor] : b->second) {
            const auto it = minima.find(name);
            const bool present = it != minima.end();
            const double observed = present ? it->second.ratio : 0.0;
            const bool pass = present && observed >= floor * (1.0 - 1e-9);
            result.ok = result.ok && pass;
            checks.push_back({{"source", source},
                              {"inequality", name},
                              {"baseline", floor},
                              {"observed", present ? json(observed) : json(nullptr)},
                              {"pass", pass}});
        }
    }
    if (!poincare_violations.empty()) result.ok = false;

    json sources = json::object();
    for (const auto& [source, minima] : per_source) sources[source] = minima_json(minima);
    result.report = {
        {"functions", functions},
        {"minimum_ratios", minima_json(overall)},
        {"by_source", std::move(sources)},
        {"poincare_violations", std::move(poincare_violations)},
        {"baseline_checks", std::move(checks)},
        {"ok", result.ok},
    };
    return result;
}

// ---------------------------------------------------------------------------
// gen

std::string gen(const FunctionSpec& spec, const std::optional<std::filesystem::path>& out,
                TableFormat format) {
    const auto fn = resolve(spec);
    const auto& f = *fn.function;
    if (format == TableFormat::json_bits) {
        const auto text = truth_table_json(f).dump() + "\n";
        if (out) write_text_file(*out, text);
        return text;
    }
    if (!out) throw ArgumentError("raw format needs --out PATH");
    write_text_file(*out, raw_bytes(f));
    const json descriptor = {{"m", f.arity()}, {"raw", out->filename().string()}};
    const auto text = descriptor.dump() + "\n";
    write_text_file(out->string() + ".json", text);
    return text;
}

json strip_volatile(json record) {
    record.erase("wall_time_ms");
    return record;
}

}  // namespace dirkkl::experiment
