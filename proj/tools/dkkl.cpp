// dkkl: isoperimetric analysis of Boolean functions and the tribes
// counterexample to the directed KKL inequality.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dirkkl/errors.hpp"
#include "dirkkl/experiment.hpp"

namespace ex = dirkkl::experiment;
using dirkkl::json;

namespace {

struct Common {
    std::uint64_t seed = 1;
    unsigned seeds = 20;
    std::uint64_t samples = 100000;
    std::string format = "json";
    std::string out;
    bool no_timing = false;
    unsigned workers = 0;
};

ex::Options options(const Common& c) {
    ex::Options o;
    o.timing = !c.no_timing;
    o.samples = c.samples;
    o.workers = c.workers;
    return o;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
    } else {
        dirkkl::write_text_file(c.out, text);
    }
}

int fail(const std::string& kind, const std::string& message, int code,
         const std::string& guard = {}) {
    json e = {{"error", kind}, {"message", message}};
    if (!guard.empty()) e["guard"] = guard;
    std::cerr << e.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isoperimetric quantities of Boolean functions and the directed KKL counterexample"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ex::kVersion));

    Common c;
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--out", c.out, "Write output to PATH instead of stdout");
        sub->add_flag("--no-timing", c.no_timing, "Omit wall time so records are byte-identical");
    };
    auto add_seeding = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "First tribes seed")->capture_default_str();
        sub->add_option("--seeds", c.seeds, "Number of consecutive seeds")->capture_default_str();
        sub->add_option("--samples", c.samples, "Monte Carlo budget beyond the exact range")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--workers", c.workers, "Sampling threads (0 = hardware)");
    };

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Full report for one function");
    std::string spec_text;
    bool witness = false;
    bool no_eps = false;
    analyze->add_option("spec", spec_text, "zoo:<name>,k=v... | file:<path> | tribes-ce:n=N,seed=S")
        ->required();
    analyze->add_flag("--witness", witness, "Include the closest monotone function (m <= 16)");
    analyze->add_flag("--no-eps", no_eps, "Skip the distance to monotonicity");
    analyze->add_option("--format", c.format)->check(CLI::IsMember({"json"}));
    add_output(analyze);

    // counterexample
    auto* cex = app.add_subcommand("counterexample", "Reproduce the tribes counterexample over seeds");
    unsigned n = 0;
    cex->add_option("--n", n, "Tribe count (power of two)")->required();
    add_seeding(cex);
    cex->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
    add_output(cex);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Directed-KKL ratio across tribe counts (CSV)");
    std::vector<unsigned> ns;
    std::vector<std::string> injected;
    sweep->add_option("--n", ns, "Tribe counts")->required()->delimiter(',');
    sweep->add_option("--inject", injected, "Extra function spec to include as a row");
    add_seeding(sweep);
    std::string sweep_format = "csv";
    sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"json", "csv"}));
    add_output(sweep);

    // verify
    auto* verify = app.add_subcommand("verify", "Minimum inequality ratios over a corpus");
    std::vector<unsigned> exhaustive;
    std::vector<std::string> named;
    unsigned random_count = 0;
    unsigned random_arity = 6;
    std::string baseline_file;
    verify->add_option("--exhaustive", exhaustive, "Every function of arity M (M <= 4)")
        ->delimiter(',');
    verify->add_option("--zoo", named, "Function spec to include (repeatable)");
    verify->add_option("--random", random_count, "Number of random functions");
    verify->add_option("--random-arity", random_arity, "Arity of the random batch")
        ->capture_default_str();
    verify->add_option("--seed", c.seed, "Seed of the first random function")
        ->capture_default_str();
    verify->add_option("--baseline", baseline_file,
                       "JSON {source: {inequality: min_ratio}} added to the built-in baselines");
    add_output(verify);

    // gen
    auto* gen = app.add_subcommand("gen", "Write a truth-table file");
    std::string table_format = "json-bits";
    gen->add_option("spec", spec_text, "Function spec")->required();
    gen->add_option("--format", table_format)->check(CLI::IsMember({"json-bits", "raw"}));
    gen->add_option("--out", c.out, "Output path (required for raw)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ex::kOk : ex::kUsage;
    }

    try {
        if (analyze->parsed()) {
            auto opt = options(c);
            opt.witness = witness;
            opt.with_eps = !no_eps;
            emit(c, ex::analyze(ex::parse_function_spec(spec_text), opt).dump(2) + "\n");
        } else if (cex->parsed()) {
            const auto opt = options(c);
            if (c.format == "csv") {
                emit(c, ex::counterexample_csv(ex::counterexample_rows(n, c.seed, c.seeds, opt)));
            } else {
                emit(c, ex::counterexample(n, c.seed, c.seeds, opt).dump(2) + "\n");
            }
        } else if (sweep->parsed()) {
            std::vector<ex::FunctionSpec> extra;
            for (const auto& s : injected) extra.push_back(ex::parse_function_spec(s));
            const auto rows = ex::sweep(ns, c.seed, c.seeds, extra, options(c));
            if (sweep_format == "csv") {
                emit(c, ex::sweep_csv(rows));
            } else {
                json a = json::array();
                for (const auto& r : rows) {
                    a.push_back({{"n", r.n},
                                 {"seed", r.seed},
                                 {"method", r.method},
                                 {"max_neg_inf", r.max_neg_inf},
                                 {"eps_or_proxy", r.eps_or_proxy},
                                 {"ratio", dirkkl::to_json(r.ratio)}});
                }
                emit(c, a.dump(2) + "\n");
            }
        } else if (verify->parsed()) {
            ex::Corpus corpus;
            corpus.exhaustive = exhaustive;
            for (const auto& s : named) corpus.named.push_back(ex::parse_function_spec(s));
            corpus.random_count = random_count;
            corpus.random_arity = random_arity;
            corpus.seed = c.seed;
            if (corpus.exhaustive.empty() && corpus.named.empty() && random_count == 0) {
                throw dirkkl::ArgumentError("empty corpus: give --exhaustive, --zoo or --random");
            }
            if (!baseline_file.empty()) {
                std::ifstream in(baseline_file);
                if (!in) throw dirkkl::IoError("cannot open " + baseline_file);
                corpus.baselines = json::parse(in)
                                       .get<std::map<std::string, std::map<std::string, double>>>();
            }
            const auto result = ex::verify(corpus);
            emit(c, result.report.dump(2) + "\n");
            if (!result.ok) throw ex::VerificationFailure("inequality check failed");
        } else if (gen->parsed()) {
            std::optional<std::filesystem::path> out;
            if (!c.out.empty()) out = c.out;
            const auto format =
                table_format == "raw" ? ex::TableFormat::raw : ex::TableFormat::json_bits;
            const auto text = ex::gen(ex::parse_function_spec(spec_text), out, format);
            if (!out) std::cout << text;
        }
    } catch (const dirkkl::CapacityError& e) {
        return fail("capacity", e.what(), ex::kCapacity, e.guard());
    } catch (const ex::VerificationFailure& e) {
        return fail("verification", e.what(), ex::kVerificationFailed);
    } catch (const dirkkl::IoError& e) {
        return fail("io", e.what(), ex::kIo);
    } catch (const dirkkl::ArgumentError& e) {
        return fail("usage", e.what(), ex::kUsage);
    } catch (const dirkkl::StructureError& e) {
        return fail("usage", e.what(), ex::kUsage);
    } catch (const json::exception& e) {
        return fail("usage", e.what(), ex::kUsage);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), ex::kInternal);
    }
    return ex::kOk;
}
