#include "tsca/rule_io.hpp"

#include <fstream>
#include <sstream>

namespace tsca {

Json rule_to_json(const LocalRule1D& rule) {
    Json j;
    j["alphabet"] = rule.input_alphabet().size;
    if (!rule.is_endomorphism()) {
        j["output_alphabet"] = rule.output_alphabet().size;
    }
    j["offsets"] = rule.neighborhood().offsets();
    j["table"] = rule.table();
    return j;
}

namespace {

template <class T>
T get_field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw InvalidInput(std::string("missing field \"") + key + "\"");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("field \"") + key + "\": " + e.what());
    }
}

} // namespace

LocalRule1D rule_from_json(const Json& j) {
    const auto m = get_field<std::int64_t>(j, "alphabet");
    if (m <= 0 || m > 0xFFFF) {
        throw InvalidInput("alphabet must be in 1..65535");
    }
    std::int64_t out = m;
    if (j.contains("output_alphabet")) {
        out = get_field<std::int64_t>(j, "output_alphabet");
        if (out <= 0 || out > 0xFFFF) {
            throw InvalidInput("output_alphabet must be in 1..65535");
        }
    }
    auto offsets = get_field<std::vector<int>>(j, "offsets");
    auto raw = get_field<std::vector<std::int64_t>>(j, "table");
    std::vector<State> table;
    table.reserve(raw.size());
    for (auto v : raw) {
        if (v < 0 || v >= out) {
            throw InvalidInput("table entry " + std::to_string(v) + " outside alphabet");
        }
        table.push_back(static_cast<State>(v));
    }
    return LocalRule1D(Alphabet(static_cast<std::uint32_t>(m)), Alphabet(static_cast<std::uint32_t>(out)),
                       Neighborhood(std::move(offsets)), std::move(table));
}

Json config_to_json(const CyclicConfig& c) {
    return Json(c.cells());
}

CyclicConfig config_from_json(const Json& j) {
    try {
        return CyclicConfig(j.get<std::vector<State>>());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("configuration: ") + e.what());
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

std::string dump_json(const Json& j) {
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << contents;
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace tsca
