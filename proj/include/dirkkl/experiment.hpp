#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dirkkl/constructions.hpp"
#include "dirkkl/io.hpp"

namespace dirkkl::experiment {

inline constexpr std::string_view kVersion = "0.1.0";

// Tribes instances are materialized and solved by min-cut while 2n <= 20.
inline constexpr unsigned kMaxExactTribes = kMaxMinCutArity / 2;

// Beyond the exact range eps is estimated as kProxyScale * E_x[Var_y f].
// The constant is the median of eps / E_x[Var_y f] over the exact min-cut
// runs at n = 8, seeds 1..20 (observed range 1.62 .. 1.78).
inline constexpr double kProxyScale = 1.73;

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kCapacity = 3,
    kVerificationFailed = 4,
    kIo = 5,
};

class VerificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "zoo:<name>,<k=v>...", "file:<path>" or "tribes-ce:n=<int>,seed=<int>".
struct FunctionSpec {
    enum class Kind { zoo, file, tribes };

    Kind kind = Kind::zoo;
    std::string text;
    ZooSpec zoo;
    std::filesystem::path path;
    unsigned n = 0;
    std::uint64_t seed = 0;
};

// Throws ArgumentError naming the offending token.
FunctionSpec parse_function_spec(std::string_view text);

// What a spec denotes: a table, a tribes layout, or both (materialized).
struct ResolvedFunction {
    std::string label;
    std::optional<TribesInstance> tribes;
    std::optional<BooleanFunction> function;
};

// Materializes tribes layouts when 2n <= kMaxArity.
ResolvedFunction resolve(const FunctionSpec& spec, bool materialize = true);

struct Options {
    bool timing = true;
    bool witness = false;
    bool with_eps = true;
    std::uint64_t samples = 100000;
    unsigned workers = 0;
};

// Full per-function analysis: influences, sensitivity profile summary,
// exact eps (arity <= 20), and the inequality report.
json analyze(const FunctionSpec& spec, const Options& opt);

// One (instance, seed) line of the counterexample reproduction.
struct CounterexampleRow {
    unsigned n = 0;
    std::uint64_t seed = 0;
    EpsMethod method = EpsMethod::mincut;
    Rational max_neg_inf_first_block;  // zero for every layout
    double max_neg_inf_second_block = 0.0;
    std::optional<Rational> exact_max_neg_inf_second_block;
    std::optional<Rational> exact_eps;
    std::optional<Rational> exact_bilinear_variance;
    double eps = 0.0;  // exact value or proxy
    double bilinear_variance = 0.0;
    double bilinear_variance_std_error = 0.0;
    std::optional<double> ratio;  // max_i Inf^-_i * 2n / (eps * ln 2n)
};

// Seed used for the Monte Carlo over x, kept apart from the layout seed.
std::uint64_t sampling_seed(std::uint64_t instance_seed);

CounterexampleRow counterexample_row(const TribesInstance& inst, const Options& opt);

// Seeds base_seed .. base_seed + seed_count - 1.
std::vector<CounterexampleRow> counterexample_rows(unsigned n, std::uint64_t base_seed,
                                                   unsigned seed_count, const Options& opt);

json counterexample(unsigned n, std::uint64_t base_seed, unsigned seed_count, const Options& opt);
std::string counterexample_csv(const std::vector<CounterexampleRow>& rows);

struct SweepRow {
    std::string n;  // tribe count, or the spec of an injected function
    std::string seed;
    std::string method;
    double max_neg_inf = 0.0;
    double eps_or_proxy = 0.0;
    std::optional<double> ratio;
};

// Directed-KKL ratio max_i Inf^-_i * m / (eps * ln m) of an arbitrary function
// (exact eps; arity <= 20).
SweepRow sweep_row(const ResolvedFunction& fn);

std::vector<SweepRow> sweep(const std::vector<unsigned>& ns, std::uint64_t base_seed,
                            unsigned seed_count, const std::vector<FunctionSpec>& injected,
                            const Options& opt);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Median of the defined ratios among rows with the given n.
std::optional<double> median_ratio(const std::vector<SweepRow>& rows, const std::string& n);

struct Corpus {
    std::vector<unsigned> exhaustive;       // arities <= 4
    std::vector<FunctionSpec> named;        // zoo, file or tribes specs
    unsigned random_count = 0;              // random batch: zoo:random,m=..,seed=..
    unsigned random_arity = 0;
    std::uint64_t seed = 0;
    // source -> inequality -> minimum ratio that must not be undercut
    std::map<std::string, std::map<std::string, double>> baselines;
};

// Frozen minimum ratios over the exhaustive corpora m = 1..4.
const std::map<std::string, std::map<std::string, double>>& builtin_baselines();

struct VerifyResult {
    json report;
    bool ok = true;
};

VerifyResult verify(const Corpus& corpus);

enum class TableFormat { json_bits, raw };

// Writes the truth table; raw writes the bytes to `out` and a descriptor to
// `out` + ".json". Returns the JSON text written (json-bits) or the
// descriptor.
std::string gen(const FunctionSpec& spec, const std::optional<std::filesystem::path>& out,
                TableFormat format);

// Removes volatile fields (wall time) so records can be compared byte for byte.
json strip_volatile(json record);

}  // namespace dirkkl::experiment
