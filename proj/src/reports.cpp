#include "tsca/reports.hpp"

#include <algorithm>

namespace tsca {

Json search_report_to_json(const SearchReport& r) {
    Json j;
    j["kind"] = "involutions";
    j["alphabet"] = r.alphabet.size;
    j["offsets"] = r.neighborhood.offsets();
    j["exhausted"] = r.exhausted;
    j["stopped_early"] = r.stopped_early;
    j["nodes"] = r.nodes;
    j["budget"] = r.budget;
    j["pruned"] = Json::object();
    for (const auto& [k, v] : r.pruned) {
        j["pruned"][k] = v;
    }
    j["found"] = Json::array();
    for (const auto& f : r.found) {
        j["found"].push_back(rule_to_json(f));
    }
    return j;
}

Json exhausted_to_json(const SearchExhausted& e, const LocalRule1D& f) {
    Json j;
    j["kind"] = "symmetry-exhausted";
    j["F"] = rule_to_json(f);
    j["max_span"] = e.max_span;
    j["nodes"] = e.nodes;
    j["candidates"] = e.candidates;
    j["bound_covered"] = e.bound_covered;
    return j;
}

Json additive_report_to_json(std::uint32_t m, int r, const std::vector<AdditiveCoefficients>& solutions) {
    Json j;
    j["kind"] = "additive";
    j["modulus"] = m;
    j["radius"] = r;
    j["solutions"] = Json::array();
    for (const auto& s : solutions) {
        j["solutions"].push_back(s.coeffs);
    }
    return j;
}

std::vector<std::string> recheck_report(const Json& j) {
    std::vector<std::string> failed;
    if (!j.is_object() || !j.contains("kind")) {
        throw InvalidInput("report has no 'kind' field");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "involutions") {
        std::vector<std::vector<State>> tables;
        for (const auto& rj : j.at("found")) {
            const LocalRule1D f = rule_from_json(rj);
            if (f.input_alphabet().size != j.at("alphabet").get<std::uint32_t>() ||
                f.neighborhood().offsets() != j.at("offsets").get<std::vector<int>>()) {
                failed.push_back("rule alphabet or offsets differ from the report header");
            }
            if (!is_involution(f)) {
                failed.push_back("listed rule is not an involution: " + describe(f));
            }
            tables.push_back(f.table());
        }
        if (!std::is_sorted(tables.begin(), tables.end())) {
            failed.push_back("found rules are not sorted by table");
        }
        if (std::adjacent_find(tables.begin(), tables.end()) != tables.end()) {
            failed.push_back("found rules contain duplicates");
        }
    } else if (kind == "additive") {
        const auto m = j.at("modulus").get<std::uint32_t>();
        const int r = j.at("radius").get<int>();
        for (const auto& cj : j.at("solutions")) {
            const AdditiveCoefficients c(m, r, cj.get<std::vector<State>>());
            if (!additive_square_is_identity(c) || !is_involution(additive_rule(c))) {
                failed.push_back("listed coefficients do not give an involution");
            }
        }
    } else if (kind == "symmetry-exhausted") {
        const LocalRule1D f = rule_from_json(j.at("F"));
        const auto again = find_symmetry(f, j.at("max_span").get<int>());
        if (std::holds_alternative<SymmetryCertificate>(again)) {
            failed.push_back("search finds a certificate within the recorded bound");
        } else if (std::get<SearchExhausted>(again).bound_covered != j.at("bound_covered").get<bool>()) {
            failed.push_back("bound coverage differs on re-run");
        }
    } else {
        throw InvalidInput("unknown report kind '" + kind + "'");
    }
    return failed;
}

} // namespace tsca
