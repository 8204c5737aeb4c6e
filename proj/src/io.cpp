#include "dirkkl/io.hpp"

#include <fstream>
#include <sstream>

#include "dirkkl/errors.hpp"

namespace dirkkl {

json to_json(const Rational& r) { return {{"num", r.numerator()}, {"den", r.denominator()}}; }

Rational rational_from_json(const json& j) {
    return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
}

json to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

namespace {

json rationals(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(to_json(r));
    return a;
}

}  // namespace

json to_json(const InfluenceReport& r) {
    return {
        {"inf", rationals(r.inf)},
        {"neg_inf", rationals(r.neg_inf)},
        {"total_influence", to_json(r.total_influence)},
        {"variance", to_json(r.variance)},
        {"talagrand", r.talagrand},
        {"directed_talagrand", r.directed_talagrand},
        {"eg_rhs", r.eg_rhs},
        {"kkl_witness_ratio", to_json(r.kkl_witness_ratio)},
    };
}

json to_json(const EpsResult& r) {
    return {
        {"eps", to_json(r.eps)},
        {"changed_points", r.changed_points},
        {"method", std::string(to_string(r.method))},
        {"matching_lower_bound",
         r.matching_lower_bound ? to_json(*r.matching_lower_bound) : json(nullptr)},
    };
}

json to_json(const InequalityReport& r) {
    json out = json::object();
    for (const auto& row : r.rows) {
        json j = {{"lhs", row.lhs}, {"rhs", row.rhs}, {"ratio", to_json(row.ratio)}};
        if (row.exact_lhs) j["exact_lhs"] = to_json(*row.exact_lhs);
        if (row.exact_rhs) j["exact_rhs"] = to_json(*row.exact_rhs);
        out[row.name] = std::move(j);
    }
    return out;
}

json to_json(const TribesInstance& inst) {
    return {{"n", inst.n}, {"seed", inst.seed}, {"tribes", inst.tribes}};
}

TribesInstance tribes_from_json(const json& j) {
    try {
        return TribesInstance::from_tribes(j.at("n").get<unsigned>(),
                                           j.value("seed", std::uint64_t{0}),
                                           j.at("tribes").get<std::vector<std::vector<unsigned>>>());
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("malformed tribes instance: ") + e.what());
    }
}

namespace {

json to_json(const Estimate& e) { return {{"mean", e.mean}, {"std_error", e.std_error}}; }

}  // namespace

json to_json(const SampledReport& r, bool per_coordinate) {
    json j = {
        {"samples", r.samples},
        {"seed", r.seed},
        {"fired_histogram", r.fired_histogram},
        {"fired_mean", to_json(r.fired_mean)},
        {"p_none", to_json(r.p_none)},
        {"p_exactly_one", to_json(r.p_exactly_one)},
        {"p_at_least_two", to_json(r.p_at_least_two)},
        {"conditional_variance", to_json(r.conditional_variance)},
        {"max_neg_inf_y", to_json(r.max_neg_inf_y)},
    };
    if (per_coordinate) {
        json a = json::array();
        for (const auto& e : r.neg_inf_y) a.push_back(to_json(e));
        j["neg_inf_y"] = std::move(a);
    }
    return j;
}

json profile_summary(const SensitivityProfile& p) {
    std::uint8_t max_sens = 0, max_neg = 0;
    for (auto s : p.sens) max_sens = std::max(max_sens, s);
    for (auto s : p.neg_sens) max_neg = std::max(max_neg, s);
    return {
        {"sens_total", p.sens_total()},
        {"neg_sens_total", p.neg_sens_total()},
        {"max_sens", max_sens},
        {"max_neg_sens", max_neg},
        {"sens_histogram", p.histogram(false)},
        {"neg_sens_histogram", p.histogram(true)},
    };
}

json truth_table_json(const BooleanFunction& f) {
    if (f.arity() > kMaxJsonBitsArity) {
        throw CapacityError("json-bits", "json-bits format is limited to arity " +
                                             std::to_string(kMaxJsonBitsArity) + "; use raw");
    }
    return {{"m", f.arity()}, {"bits", f.to_bit_string()}};
}

std::string raw_bytes(const BooleanFunction& f) {
    const std::uint64_t n = (f.size() + 7) / 8;
    std::string out(n, '\0');
    const auto words = f.words();
    for (std::uint64_t b = 0; b < n; ++b) {
        out[b] = static_cast<char>((words[b >> 3] >> ((b & 7) * 8)) & 0xFFu);
    }
    return out;
}

BooleanFunction from_raw_bytes(unsigned arity, const std::string& bytes) {
    BooleanFunction::check_arity(arity);
    const std::uint64_t expected = ((std::uint64_t{1} << arity) + 7) / 8;
    if (bytes.size() != expected) {
        throw ArgumentError("raw truth table length mismatch: expected " +
                            std::to_string(expected) + " bytes, got " +
                            std::to_string(bytes.size()));
    }
    std::vector<std::uint64_t> words(BooleanFunction::word_count(arity), 0);
    for (std::uint64_t b = 0; b < expected; ++b) {
        words[b >> 3] |= std::uint64_t{static_cast<unsigned char>(bytes[b])} << ((b & 7) * 8);
    }
    if (arity < 3) {
        const auto valid = (1u << (1u << arity)) - 1;
        if ((words[0] & ~std::uint64_t{valid}) != 0) {
            throw ArgumentError("raw truth table has bits set past 2^m");
        }
    }
    return BooleanFunction::from_words(arity, std::move(words));
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

LoadedFunction load_function_file(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ArgumentError("cannot parse " + path.string() + ": " + e.what());
    }
    if (j.contains("tribes")) return tribes_from_json(j);
    if (!j.contains("m")) throw ArgumentError(path.string() + ": missing \"m\"");
    const auto m = j.at("m").get<unsigned>();
    if (j.contains("bits")) return build_function(m, j.at("bits").get<std::string>());
    if (j.contains("raw")) {
        std::filesystem::path raw = j.at("raw").get<std::string>();
        if (raw.is_relative()) raw = path.parent_path() / raw;
        return from_raw_bytes(m, read_file(raw));
    }
    throw ArgumentError(path.string() + ": expected \"bits\", \"raw\" or \"tribes\"");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dirkkl
