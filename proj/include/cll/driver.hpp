#pragma once
#include <string>

#include "json.hpp"

namespace cll {

using json = nlohmann::json;

// Canonical config text (sorted keys, output path removed) and its hash.
std::string canonical_config(const json& cfg);
std::string config_hash(const json& cfg);

// Dispatches one experiment config {"command": ..., parameters...} and returns its result record.
// When cfg has "out", the record is appended to that file as one JSON line.
json run_config(const json& cfg);

// Reruns every manifest entry {"name", "config", "expect"} and compares results. Expectations are
// exact values ({"count": 1}) or estimates ({"mean": {"target": t, "sigmas": 3}}), keyed by
// dotted result paths.
json regression_suite(const json& manifest);

}  // namespace cll
