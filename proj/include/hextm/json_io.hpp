#pragma once

// JSON mappings shared by reports, the CLI's structured output and the
// HTTP service.

#include <json.hpp>

#include "hextm/evalrunner.hpp"
#include "hextm/interpret.hpp"
#include "hextm/tsetlin.hpp"

namespace hextm {

using Json = nlohmann::ordered_json;

Json to_json(const TMConfig& c);
TMConfig tm_config_from_json(const Json& j);
Json to_json(const SplitConfig& c);
SplitConfig split_config_from_json(const Json& j);
Json to_json(const GenConfig& c);
GenConfig gen_config_from_json(const Json& j);

Json to_json(const EvalReport& r);
EvalReport report_from_json(const Json& j);

// {"label": "black"|"white", "voteSum": v, "margin": m}
Json prediction_json(const Prediction& p);

// {"blackCounts": [...36], "whiteCounts": [...36], "prediction": {...}}
Json heatmap_json(const Heatmap& h);

Json ranked_clause_json(const RankedClause& c);
Json top_clauses_json(const TopClauses& top, Polarity polarity, int k, double alpha);

}  // namespace hextm
