#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "json.hpp"

#include "dirkkl/constructions.hpp"
#include "dirkkl/hypercube.hpp"
#include "dirkkl/iso_metrics.hpp"
#include "dirkkl/monotonicity.hpp"
#include "dirkkl/rational.hpp"

namespace dirkkl {

using json = nlohmann::json;

// json-bits is only written for m <= 16; larger tables go to raw files.
inline constexpr unsigned kMaxJsonBitsArity = 16;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json to_json(const Rational& r);
Rational rational_from_json(const json& j);
json to_json(const std::optional<double>& v);  // null when undefined

json to_json(const InfluenceReport& r);
json to_json(const EpsResult& r);
json to_json(const InequalityReport& r);
json to_json(const TribesInstance& inst);
json to_json(const SampledReport& r, bool per_coordinate);
json profile_summary(const SensitivityProfile& p);

TribesInstance tribes_from_json(const json& j);

// {"m": m, "bits": "0110..."}
json truth_table_json(const BooleanFunction& f);

// ceil(2^m / 8) bytes; bit j of byte b is f(8b + j).
std::string raw_bytes(const BooleanFunction& f);
BooleanFunction from_raw_bytes(unsigned arity, const std::string& bytes);

// Either a truth table or an explicit tribes layout, as found in a file.
using LoadedFunction = std::variant<BooleanFunction, TribesInstance>;

// Reads {"m", "bits"}, {"m", "raw"} (a relative raw path is resolved against
// the JSON file's directory), or {"n", "seed", "tribes"}.
LoadedFunction load_function_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dirkkl
