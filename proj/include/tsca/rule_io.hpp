#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "tsca/rule.hpp"

namespace tsca {

using Json = nlohmann::ordered_json;

// {"alphabet": m, "offsets": [...], "table": [...]}; "output_alphabet" only
// when it differs from "alphabet".
Json rule_to_json(const LocalRule1D& rule);
// Validates sizes and ranges; throws InvalidInput.
LocalRule1D rule_from_json(const Json& j);

Json config_to_json(const CyclicConfig& c);
CyclicConfig config_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
// Serializes with two-space indentation and a trailing newline.
std::string dump_json(const Json& j);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace tsca
