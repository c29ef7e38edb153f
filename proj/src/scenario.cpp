#include "tsca/scenario.hpp"

#include <filesystem>
#include <random>

#include "tsca/image.hpp"
#include "tsca/symmetry.hpp"
#include "tsca/zoo.hpp"

namespace tsca {

namespace {

const char* turn_name(TurnConvention t) {
    return t == TurnConvention::WhiteRight ? "white-right" : "black-right";
}

TurnConvention parse_turn(const std::string& s) {
    if (s == "white-right") {
        return TurnConvention::WhiteRight;
    }
    if (s == "black-right") {
        return TurnConvention::BlackRight;
    }
    throw InvalidInput("turn must be 'white-right' or 'black-right', got '" + s + "'");
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("scenario field '") + key + "': " + e.what());
    }
}

std::string image_ext(Alphabet m) {
    return m.size == 2 ? ".pbm" : ".pgm";
}

// ------------------------------------------------------------------- systems

SimulationOutput run_ant(const Scenario& s) {
    SimulationOutput out;
    const auto trace = ant_trajectory(s.width, s.height, s.steps, s.turn);
    AntState st = ant_initial(s.width, s.height);
    for (std::size_t t = 0; t < s.steps; ++t) {
        st = ant_oracle_step(st, s.turn);
    }
    const AntGrid final_grid = encode_ant(st);
    out.files.emplace_back("ant.ppm", ant_ppm(final_grid));
    if (s.text) {
        out.files.emplace_back("ant.txt", ant_text(final_grid));
    }
    out.files.emplace_back("trajectory.csv", trajectory_csv(trace));

    std::size_t black = 0;
    for (Color c : st.colors.cells()) {
        black += c == Color::Black;
    }
    out.summary["black_cells"] = black;
    out.summary["position"] = {st.x, st.y};
    out.summary["heading"] = heading_name(st.heading);
    if (const auto hw = detect_highway(trace)) {
        out.summary["highway"] = {{"onset", hw->onset}, {"period", hw->period}, {"dx", hw->dx}, {"dy", hw->dy}};
    } else {
        out.summary["highway"] = nullptr;
    }

    if (s.reverse_at) {
        const AntGrid start = encode_ant(ant_initial(s.width, s.height));
        AntGrid g = start;
        for (std::size_t t = 0; t < *s.reverse_at; ++t) {
            g = ant_step(g, s.turn);
        }
        g = head_tail_swap(g);
        for (std::size_t t = 0; t < *s.reverse_at; ++t) {
            g = ant_step(g, s.turn);
        }
        g = head_tail_swap(g);
        out.reversal_ok = g == start;
    }
    return out;
}

BilliardGrid billiard_start(const Scenario& s) {
    BilliardGrid g = make_billiard(s.width, s.height);
    if (s.random) {
        if (s.density_percent > 100) {
            throw InvalidInput("density_percent must be at most 100");
        }
        std::mt19937_64 rng(s.seed);
        for (int y = 0; y < s.height; ++y) {
            for (int x = 0; x < s.width; ++x) {
                if (rng() % 100 < s.density_percent) {
                    g.at(x, y).color = Color::Black;
                }
            }
        }
    }
    for (const auto& [x, y] : s.balls) {
        if (x < 0 || y < 0 || x >= s.width || y >= s.height) {
            throw InvalidInput("ball outside the torus");
        }
        g.at(x, y).color = Color::Black;
    }
    return g;
}

SimulationOutput run_billiard(const Scenario& s) {
    SimulationOutput out;
    const BilliardGrid start = billiard_start(s);
    BilliardGrid g = start;
    for (std::size_t t = 0; t < s.steps; ++t) {
        g = billiard_step(g);
    }
    out.files.emplace_back("initial.ppm", billiard_ppm(start));
    out.files.emplace_back("final.ppm", billiard_ppm(g));
    if (s.text) {
        out.files.emplace_back("initial.txt", billiard_text(start));
        out.files.emplace_back("final.txt", billiard_text(g));
    }
    out.summary["black_cells_initial"] = count_black(start);
    out.summary["black_cells_final"] = count_black(g);

    if (s.reverse_at) {
        BilliardGrid r = start;
        for (std::size_t t = 0; t < *s.reverse_at; ++t) {
            r = billiard_step(r);
        }
        r = arrow_flip(r);
        for (std::size_t t = 0; t < *s.reverse_at; ++t) {
            r = billiard_step(r);
        }
        r = arrow_flip(r);
        out.reversal_ok = r == start;
    }
    return out;
}

CyclicConfig line_start(const Scenario& s, Alphabet m) {
    if (s.initial) {
        for (State v : s.initial->cells()) {
            if (v >= m.size) {
                throw InvalidInput("initial configuration has a state outside the alphabet");
            }
        }
        return *s.initial;
    }
    if (s.n == 0) {
        throw InvalidInput("n must be positive");
    }
    std::vector<State> cells(s.n, 0);
    if (s.random) {
        std::mt19937_64 rng(s.seed);
        for (auto& c : cells) {
            c = static_cast<State>(rng() % m.size);
        }
    } else {
        cells[s.n / 2] = 1 % m.size;
    }
    return CyclicConfig(std::move(cells));
}

SimulationOutput run_line(const Scenario& s) {
    SimulationOutput out;
    LocalRule1D rule = identity_rule(Alphabet(2));
    std::optional<LocalRule1D> reversal = s.reversal;
    if (s.system == "rule") {
        if (!s.rule) {
            throw InvalidInput("system 'rule' needs a rule");
        }
        rule = *s.rule;
    } else {
        const ZooEntry& e = zoo_entry(s.zoo_name);
        rule = e.rule;
        if (!reversal) {
            if (const auto it = e.companions.find("reversal"); it != e.companions.end()) {
                reversal = it->second;
            }
        }
    }
    if (!rule.is_endomorphism()) {
        throw InvalidInput("simulation needs a rule with equal input and output alphabets");
    }
    const Alphabet m = rule.input_alphabet();
    const CyclicConfig c0 = line_start(s, m);

    const OrbitRecord rec = orbit(rule, c0, s.steps);
    out.files.emplace_back("spacetime" + image_ext(m), spacetime_image(rec.configs, m));
    if (s.text) {
        out.files.emplace_back("spacetime.txt", spacetime_text(rec.configs));
    }
    out.summary["rule"] = rule_to_json(rule);
    out.summary["initial"] = config_to_json(c0);
    out.summary["final"] = config_to_json(rec.configs.back());
    if (rec.period) {
        out.summary["transient"] = *rec.transient;
        out.summary["period"] = *rec.period;
    } else {
        out.summary["period"] = nullptr;
    }

    std::optional<SymmetryCertificate> cert;
    if (reversal && (s.alternating || s.reverse_at)) {
        cert = expect_certificate(verify_certificate(rule, *reversal), "simulation reversal");
    }
    if (s.alternating) {
        if (!cert) {
            throw InvalidInput("alternating trace needs a reversal");
        }
        const AlternatingTrace tr = alternating_orbit(*cert, c0, s.steps);
        std::vector<CyclicConfig> rows;
        for (std::size_t t = 0; t < tr.unprimed.size(); ++t) {
            rows.push_back(tr.unprimed[t]);
            rows.push_back(tr.primed[t]);
        }
        out.files.emplace_back("alternating" + image_ext(m), spacetime_image(rows, m));
    }
    if (s.reverse_at) {
        if (!cert) {
            throw InvalidInput("reversal self-test needs a reversal");
        }
        CyclicConfig c = c0;
        for (std::size_t t = 0; t < *s.reverse_at; ++t) {
            c = apply(rule, c);
        }
        c = apply(cert->reversal(), c);
        for (std::size_t t = 0; t < *s.reverse_at; ++t) {
            c = apply(rule, c);
        }
        c = apply(cert->reversal(), c);
        out.reversal_ok = c == c0;
    }
    return out;
}

} // namespace

Json scenario_to_json(const Scenario& s) {
    Json j;
    j["system"] = s.system;
    j["steps"] = s.steps;
    j["reverse_at"] = s.reverse_at ? Json(*s.reverse_at) : Json(nullptr);
    j["seed"] = s.seed;
    j["random"] = s.random;
    j["text"] = s.text;
    if (s.system == "ant" || s.system == "billiard") {
        j["width"] = s.width;
        j["height"] = s.height;
    }
    if (s.system == "ant") {
        j["turn"] = turn_name(s.turn);
    }
    if (s.system == "billiard") {
        j["balls"] = Json::array();
        for (const auto& b : s.balls) {
            j["balls"].push_back({b[0], b[1]});
        }
        j["density_percent"] = s.density_percent;
    }
    if (s.system == "rule" || s.system == "zoo") {
        j["n"] = s.n;
        j["initial"] = s.initial ? config_to_json(*s.initial) : Json(nullptr);
        j["alternating"] = s.alternating;
        if (s.system == "zoo") {
            j["zoo"] = s.zoo_name;
        } else if (s.rule) {
            j["rule"] = rule_to_json(*s.rule);
        }
        j["reversal"] = s.reversal ? rule_to_json(*s.reversal) : Json(nullptr);
    }
    return j;
}

Scenario scenario_from_json(const Json& input) {
    const Json& j = input.contains("scenario") ? input.at("scenario") : input;
    if (!j.is_object()) {
        throw InvalidInput("scenario must be a JSON object");
    }
    Scenario s;
    s.system = get_or<std::string>(j, "system", "");
    if (s.system == "hedlund") {
        s.system = "zoo";
        s.zoo_name = "hedlund";
    }
    if (s.system != "ant" && s.system != "billiard" && s.system != "rule" && s.system != "zoo") {
        throw InvalidInput("unknown simulation system '" + s.system + "'");
    }
    s.steps = get_or<std::size_t>(j, "steps", 0);
    if (j.contains("reverse_at") && !j.at("reverse_at").is_null()) {
        s.reverse_at = get_or<std::size_t>(j, "reverse_at", 0);
    }
    s.seed = get_or<std::uint64_t>(j, "seed", 0);
    s.random = get_or<bool>(j, "random", false);
    s.text = get_or<bool>(j, "text", false);
    s.width = get_or<int>(j, "width", s.width);
    s.height = get_or<int>(j, "height", s.height);
    s.turn = parse_turn(get_or<std::string>(j, "turn", "white-right"));
    if (j.contains("balls")) {
        for (const auto& b : j.at("balls")) {
            if (!b.is_array() || b.size() != 2) {
                throw InvalidInput("each ball must be [x, y]");
            }
            s.balls.push_back({b[0].get<int>(), b[1].get<int>()});
        }
    }
    s.density_percent = get_or<std::uint32_t>(j, "density_percent", s.density_percent);
    s.n = get_or<std::size_t>(j, "n", s.n);
    if (j.contains("initial") && !j.at("initial").is_null()) {
        s.initial = config_from_json(j.at("initial"));
    }
    if (j.contains("rule") && !j.at("rule").is_null()) {
        s.rule = rule_from_json(j.at("rule"));
    }
    if (j.contains("reversal") && !j.at("reversal").is_null()) {
        s.reversal = rule_from_json(j.at("reversal"));
    }
    s.zoo_name = get_or<std::string>(j, "zoo", s.zoo_name);
    s.alternating = get_or<bool>(j, "alternating", false);
    if (s.system == "zoo" && s.zoo_name.empty()) {
        throw InvalidInput("system 'zoo' needs a 'zoo' entry name");
    }
    return s;
}

SimulationOutput run_scenario(const Scenario& s) {
    SimulationOutput out;
    if (s.system == "ant") {
        out = run_ant(s);
    } else if (s.system == "billiard") {
        out = run_billiard(s);
    } else if (s.system == "rule" || s.system == "zoo") {
        out = run_line(s);
    } else {
        throw InvalidInput("unknown simulation system '" + s.system + "'");
    }
    out.summary["steps"] = s.steps;
    if (out.reversal_ok) {
        out.summary["reversal_ok"] = *out.reversal_ok;
    }
    return out;
}

std::vector<std::string> write_simulation(const Scenario& s, const SimulationOutput& out,
                                          const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> names;
    for (const auto& [name, contents] : out.files) {
        write_file_atomic(dir / name, contents);
        names.push_back(name);
    }
    write_file_atomic(dir / "summary.json", dump_json(out.summary));
    names.push_back("summary.json");
    Json manifest;
    manifest["subcommand"] = "simulate";
    manifest["scenario"] = scenario_to_json(s);
    manifest["seed"] = s.seed;
    manifest["outputs"] = names;
    write_file_atomic(dir / "manifest.json", dump_json(manifest));
    names.push_back("manifest.json");
    return names;
}

} // namespace tsca
