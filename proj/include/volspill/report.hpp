#pragma once

#include "volspill/pipeline.hpp"

#include <json.hpp>
#include <string>

namespace volspill {

using Json = nlohmann::ordered_json;

Json to_json(const AdfResult& r);
Json to_json(const JohansenResult& r);
Json to_json(const MeanModelFit& fit);
Json to_json(const BekkFit& fit);
Json to_json(const SummaryStats& s);
Json to_json(const RunReport& report);

/// Rebuilds the configuration echoed in a report.
KeyValueConfig config_from_report(const Json& report);

/// Text tables from a serialized report: summary statistics, cointegration tests,
/// long-run relationships, mean-model coefficients and BEKK estimates.
std::string summarize(const Json& report);

} // namespace volspill
