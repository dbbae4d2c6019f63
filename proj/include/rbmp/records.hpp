#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rbmp/oracle.hpp"

namespace rbmp {

// JSON-lines records. Infinite radius limits are written as null.

nlohmann::json to_json_record(const MatchingInstance& instance);
nlohmann::json to_json_record(const MatchingSolution& solution);
MatchingInstance instance_from_json(const nlohmann::json& j);
MatchingSolution solution_from_json(const nlohmann::json& j);

void write_jsonl(std::ostream& out, const nlohmann::json& record);

}  // namespace rbmp
