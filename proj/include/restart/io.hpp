#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "restart/classify.hpp"
#include "restart/conjecture.hpp"
#include "restart/distribution.hpp"
#include "restart/optimize.hpp"
#include "restart/reset.hpp"
#include "restart/simulate.hpp"

namespace restart {

using Json = nlohmann::json;

/**
 * Spec documents:
 *   {"family": "exponential", "params": {"rate": 1}}
 *   {"family": "weibull", "params": {"shape": 0.5}}
 *   {"family": "shifted_pareto_square", "params": {"offset": 0.5}}
 *   {"family": "piecewise_constant", "params": {"breakpoints": [...], "levels": [...]}}
 *   {"family": "piecewise_exp", "params": {"segments": [{"start", "intercept", "rate"}, ...]}}
 *   {"family": "levy_first_passage", "params": {"level": 1}}
 *   {"family": "tabulated", "grid": [...], "values": [...], "interpolation": "step"}
 *   {"family": "mrl", "grid": [...], "values": [...], "m0": 1, "terminal": "linear"}
 * plus an optional top-level "defect". Throws Error(Parse) on bad documents.
 */
DistributionSpec spec_from_json(const Json& doc);
Json spec_to_json(const DistributionSpec& spec);

/// Throws Error(Io) when the file cannot be read, Error(Parse) on bad JSON.
DistributionSpec read_spec_file(const std::string& path);
Json read_json_file(const std::string& path);

/// `det:<r>`, `exp:<rate>` or `file:<path>`; throws Error(Parse) or Error(Io).
ResetLaw parse_reset(std::string_view descriptor);

/// JSON numbers, with non-finite values written as the strings "inf", "-inf", "nan".
Json number(double x);
Json numbers(const std::vector<double>& xs);

Json to_json(const Check& check);
Json to_json(const ClassificationReport& report);
Json to_json(const SimulationResult& result);
Json to_json(const ExtremalReport& report);
Json to_json(const InvarianceResidual& residual);
Json to_json(const MomentTransfer& transfer);

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

/// Header row then one row per index; `.` decimal point, LF endings, shortest round-trip numbers.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

}  // namespace restart
