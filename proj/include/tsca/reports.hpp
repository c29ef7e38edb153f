#pragma once

#include <string>
#include <vector>

#include "tsca/involution.hpp"
#include "tsca/rule_io.hpp"
#include "tsca/symmetry.hpp"

namespace tsca {

Json search_report_to_json(const SearchReport& r);
Json exhausted_to_json(const SearchExhausted& e, const LocalRule1D& f);
Json additive_report_to_json(std::uint32_t m, int r, const std::vector<AdditiveCoefficients>& solutions);

// Re-checks a report read from disk. Returns the list of failed checks; empty
// means the file is consistent. Throws InvalidInput on malformed files.
std::vector<std::string> recheck_report(const Json& j);

} // namespace tsca
