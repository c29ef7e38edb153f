#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "tsca/involution.hpp"
#include "tsca/reports.hpp"
#include "tsca/rule_io.hpp"
#include "tsca/scenario.hpp"
#include "tsca/symmetry.hpp"
#include "tsca/zoo.hpp"

namespace fs = std::filesystem;
using namespace tsca;

namespace {

enum Exit : int { kOk = 0, kExhausted = 3, kInvalid = 4, kVerification = 5 };

std::vector<int> parse_offsets(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw InvalidInput("bad offset '" + item + "' in '" + text + "'");
        }
    }
    if (out.empty()) {
        throw InvalidInput("offset list is empty");
    }
    return out;
}

std::uint64_t default_budget() {
    if (const char* env = std::getenv("TSCA_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (const std::logic_error&) {
            throw InvalidInput(std::string("TSCA_BUDGET is not a number: ") + env);
        }
    }
    return 50'000'000;
}

void write_manifest(const fs::path& dir, const std::string& subcommand, Json parameters,
                    const std::vector<std::string>& outputs, std::uint64_t budget) {
    Json m;
    m["subcommand"] = subcommand;
    m["parameters"] = std::move(parameters);
    m["budget"] = budget;
    m["outputs"] = outputs;
    write_file_atomic(dir / "manifest.json", dump_json(m));
}

struct RuleSource {
    std::string file;
    std::string zoo_name;
    int eca_number = -1;

    LocalRule1D load() const {
        const int given = !file.empty() + !zoo_name.empty() + (eca_number >= 0);
        if (given != 1) {
            throw InvalidInput("give exactly one of --rule, --zoo, --eca");
        }
        if (!file.empty()) {
            return rule_from_json(read_json_file(file));
        }
        if (!zoo_name.empty()) {
            return zoo_entry(zoo_name).rule;
        }
        return eca(eca_number);
    }
};

void add_rule_source(CLI::App* cmd, RuleSource& src) {
    cmd->add_option("--rule", src.file, "rule JSON file");
    cmd->add_option("--zoo", src.zoo_name, "zoo entry name");
    cmd->add_option("--eca", src.eca_number, "elementary CA number 0..255");
}

// ------------------------------------------------------------- subcommands

struct InvolutionsArgs {
    std::uint32_t m = 2;
    std::string offsets = "0";
    std::uint64_t budget = 0;
    unsigned threads = 1;
    std::size_t stop_after = 0;
    std::string out = "tsca-out/involutions";
};

int cmd_involutions(const InvolutionsArgs& a) {
    EnumerationSpec spec;
    spec.alphabet = Alphabet(a.m);
    spec.neighborhood = Neighborhood(parse_offsets(a.offsets));
    spec.budget = a.budget != 0 ? a.budget : default_budget();
    spec.threads = a.threads;
    spec.partition_depth = a.threads > 1 ? 4 : 0;
    spec.stop_after = a.stop_after;
    const SearchReport r = enumerate_involutions(spec);

    const fs::path dir(a.out);
    fs::create_directories(dir);
    std::vector<std::string> outputs;
    for (std::size_t i = 0; i < r.found.size(); ++i) {
        const std::string name = "rule-" + std::to_string(i) + ".json";
        write_file_atomic(dir / name, dump_json(rule_to_json(r.found[i])));
        outputs.push_back(name);
    }
    write_file_atomic(dir / "report.json", dump_json(search_report_to_json(r)));
    outputs.push_back("report.json");
    write_manifest(dir, "involutions",
                   {{"m", a.m}, {"offsets", spec.neighborhood.offsets()}, {"stop_after", a.stop_after}},
                   outputs, spec.budget);

    std::cout << r.found.size() << " involution(s), " << r.nodes << " nodes"
              << (r.exhausted ? ", search complete" : ", search incomplete") << "\n";
    for (const auto& f : r.found) {
        std::cout << "  " << describe(f);
        if (const auto n = eca_number(f); n && f.neighborhood() == Neighborhood{-1, 0, 1}) {
            std::cout << "  (ECA " << *n << ")";
        }
        std::cout << "\n";
    }
    return r.exhausted || r.stopped_early ? kOk : kExhausted;
}

struct SymmetryArgs {
    RuleSource source;
    int max_span = 2;
    std::uint64_t budget = 0;
    unsigned threads = 1;
    std::string out = "tsca-out/symmetry";
};

int cmd_symmetry(const SymmetryArgs& a) {
    const LocalRule1D f = a.source.load();
    const std::uint64_t budget = a.budget != 0 ? a.budget : default_budget();
    const auto result = find_symmetry(f, a.max_span, budget, a.threads);

    const fs::path dir(a.out);
    fs::create_directories(dir);
    Json params{{"F", rule_to_json(f)}, {"max_span", a.max_span}};
    if (const auto* cert = std::get_if<SymmetryCertificate>(&result)) {
        write_file_atomic(dir / "certificate.json", dump_json(certificate_to_json(*cert)));
        write_manifest(dir, "symmetry", params, {"certificate.json"}, budget);
        std::cout << "time-symmetric\n  reversal H: " << describe(cert->reversal())
                  << "\n  companion G = F∘H: " << describe(cert->companion()) << "\n";
        return kOk;
    }
    const auto& ex = std::get<SearchExhausted>(result);
    write_file_atomic(dir / "report.json", dump_json(exhausted_to_json(ex, f)));
    write_manifest(dir, "symmetry", params, {"report.json"}, budget);
    std::cout << "no reversal with span <= " << a.max_span << " (" << ex.candidates << " candidates, "
              << ex.nodes << " nodes" << (ex.bound_covered ? "" : ", budget ran out") << ")\n";
    if (!a.source.zoo_name.empty()) {
        for (const auto& ann : zoo_entry(a.source.zoo_name).annotations) {
            if (ann.claim == "not time-symmetric") {
                std::cout << "note: " << ann.claim << ": " << ann.basis << "\n";
            }
        }
    }
    return kExhausted;
}

struct AdditiveArgs {
    std::uint32_t m = 4;
    int radius = 1;
    std::string out = "tsca-out/additive";
};

int cmd_additive(const AdditiveArgs& a) {
    const auto sols = solve_additive_involutions(a.m, a.radius);
    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_file_atomic(dir / "report.json", dump_json(additive_report_to_json(a.m, a.radius, sols)));
    write_manifest(dir, "additive", {{"m", a.m}, {"radius", a.radius}}, {"report.json"}, 0);
    std::cout << sols.size() << " additive involution(s) mod " << a.m << ", radius " << a.radius << "\n";
    for (const auto& s : sols) {
        std::cout << " ";
        for (State c : s.coeffs) {
            std::cout << ' ' << c;
        }
        std::cout << "\n";
    }
    return kOk;
}

struct SimulateArgs {
    std::string system;
    std::string scenario_file;
    std::size_t steps = 0;
    std::size_t reverse_at = 0;
    std::uint64_t seed = 0;
    bool random = false;
    bool text = false;
    bool alternating = false;
    int width = 256;
    int height = 256;
    std::size_t n = 64;
    std::string turn = "white-right";
    std::string rule_file;
    std::string reversal_file;
    std::string zoo_name;
    std::string out;
};

int cmd_simulate(const SimulateArgs& a, const CLI::App& cmd) {
    Scenario s;
    if (!a.scenario_file.empty()) {
        s = scenario_from_json(read_json_file(a.scenario_file));
    } else {
        Json j;
        j["system"] = a.system;
        j["steps"] = a.steps;
        if (cmd.count("--reverse-at") > 0) {
            j["reverse_at"] = a.reverse_at;
        }
        j["seed"] = a.seed;
        j["random"] = a.random;
        j["text"] = a.text;
        j["alternating"] = a.alternating;
        j["width"] = a.width;
        j["height"] = a.height;
        j["n"] = a.n;
        j["turn"] = a.turn;
        if (!a.rule_file.empty()) {
            j["rule"] = read_json_file(a.rule_file);
        }
        if (!a.reversal_file.empty()) {
            j["reversal"] = read_json_file(a.reversal_file);
        }
        if (!a.zoo_name.empty()) {
            j["zoo"] = a.zoo_name;
        }
        s = scenario_from_json(j);
    }
    const std::string label = s.system == "zoo" ? s.zoo_name : s.system;
    const fs::path dir = a.out.empty() ? fs::path("tsca-out") / ("simulate-" + label) : fs::path(a.out);
    const SimulationOutput out = run_scenario(s);
    const auto names = write_simulation(s, out, dir);
    std::cout << "wrote";
    for (const auto& n : names) {
        std::cout << ' ' << (dir / n).string();
    }
    std::cout << "\n";
    if (out.summary.contains("highway") && !out.summary["highway"].is_null()) {
        const auto& h = out.summary["highway"];
        std::cout << "highway: period " << h["period"] << " from step " << h["onset"] << ", displacement ("
                  << h["dx"] << ", " << h["dy"] << ")\n";
    }
    if (out.reversal_ok) {
        std::cout << "reversal self-test at " << *s.reverse_at << ": "
                  << (*out.reversal_ok ? "initial configuration recovered" : "FAILED") << "\n";
        return *out.reversal_ok ? kOk : kVerification;
    }
    return kOk;
}

int cmd_zoo_list() {
    for (const auto& e : zoo()) {
        std::cout << e.name << ": " << e.description << "\n";
        for (const auto& a : e.annotations) {
            std::cout << "    " << a.claim << "  [" << a.basis << "]\n";
        }
    }
    return kOk;
}

int cmd_zoo_export(const std::string& out) {
    const fs::path dir(out);
    fs::create_directories(dir);
    std::vector<std::string> outputs;
    for (const auto& e : zoo()) {
        Json j;
        j["name"] = e.name;
        j["description"] = e.description;
        j["rule"] = rule_to_json(e.rule);
        j["annotations"] = Json::array();
        for (const auto& a : e.annotations) {
            j["annotations"].push_back({{"claim", a.claim}, {"basis", a.basis}});
        }
        j["companions"] = Json::object();
        for (const auto& [k, v] : e.companions) {
            j["companions"][k] = rule_to_json(v);
        }
        write_file_atomic(dir / (e.name + ".json"), dump_json(j));
        outputs.push_back(e.name + ".json");
        if (const auto it = e.companions.find("reversal"); it != e.companions.end()) {
            const auto cert = expect_certificate(verify_certificate(e.rule, it->second), e.name);
            write_file_atomic(dir / (e.name + ".certificate.json"), dump_json(certificate_to_json(cert)));
            outputs.push_back(e.name + ".certificate.json");
        }
    }
    write_manifest(dir, "zoo", Json::object(), outputs, 0);
    std::cout << "exported " << zoo().size() << " entries to " << dir.string() << "\n";
    return kOk;
}

// Replays a simulate manifest and compares every output byte for byte.
int verify_manifest(const Json& j, const fs::path& path) {
    const fs::path dir = path.parent_path();
    const std::string sub = j.at("subcommand").get<std::string>();
    if (sub != "simulate") {
        int status = kOk;
        for (const auto& name : j.at("outputs")) {
            const fs::path p = dir / name.get<std::string>();
            if (p.extension() == ".json" && p.filename() != "manifest.json") {
                const Json inner = read_json_file(p);
                if (inner.contains("F") && inner.contains("H")) {
                    if (std::holds_alternative<InvalidCertificate>(certificate_from_json(inner))) {
                        std::cout << p.string() << ": certificate INVALID\n";
                        status = kVerification;
                    }
                } else if (inner.contains("kind")) {
                    for (const auto& f : recheck_report(inner)) {
                        std::cout << p.string() << ": " << f << "\n";
                        status = kVerification;
                    }
                }
            }
        }
        std::cout << (status == kOk ? "manifest outputs re-checked: ok\n" : "manifest outputs: FAILED\n");
        return status;
    }
    const Scenario s = scenario_from_json(j);
    const SimulationOutput out = run_scenario(s);
    std::vector<std::pair<std::string, std::string>> expected = out.files;
    expected.emplace_back("summary.json", dump_json(out.summary));
    int status = kOk;
    for (const auto& [name, contents] : expected) {
        std::ifstream in(dir / name, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        if (!in || buf.str() != contents) {
            std::cout << (dir / name).string() << ": differs from a fresh run\n";
            status = kVerification;
        }
    }
    std::cout << (status == kOk ? "simulation reproduced byte for byte\n" : "simulation NOT reproduced\n");
    return status;
}

int cmd_verify(const std::string& file) {
    const fs::path path(file);
    const Json j = read_json_file(path);
    if (j.contains("subcommand")) {
        return verify_manifest(j, path);
    }
    if (j.contains("F") && j.contains("H")) {
        const auto r = certificate_from_json(j);
        if (const auto* bad = std::get_if<InvalidCertificate>(&r)) {
            std::cout << "certificate INVALID: " << bad->failed << "\n";
            return kVerification;
        }
        for (const auto& c : std::get<SymmetryCertificate>(r).log().checks) {
            std::cout << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << "\n";
        }
        std::cout << "certificate valid\n";
        return kOk;
    }
    if (j.contains("kind")) {
        const auto failed = recheck_report(j);
        for (const auto& f : failed) {
            std::cout << "  " << f << "\n";
        }
        std::cout << (failed.empty() ? "report consistent\n" : "report INCONSISTENT\n");
        return failed.empty() ? kOk : kVerification;
    }
    if (j.contains("table")) {
        const LocalRule1D f = rule_from_json(j);
        std::cout << describe(f) << "\n  involution: " << (is_involution(f) ? "yes" : "no") << "\n";
        return kOk;
    }
    throw InvalidInput("unrecognized file: " + file);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-symmetric cellular automata toolkit"};
    app.require_subcommand(1);

    InvolutionsArgs inv;
    auto* c_inv = app.add_subcommand("involutions", "enumerate involutive local rules");
    c_inv->add_option("--m", inv.m, "alphabet size")->required();
    c_inv->add_option("--offsets", inv.offsets, "comma-separated neighborhood, e.g. -1,0,1")->required();
    c_inv->add_option("--budget", inv.budget, "search node cap (default: TSCA_BUDGET or 50000000)");
    c_inv->add_option("--threads", inv.threads, "worker threads")->check(CLI::Range(1u, 256u));
    c_inv->add_option("--stop-after", inv.stop_after, "stop after this many finds");
    c_inv->add_option("--out", inv.out, "output directory");

    SymmetryArgs sym;
    auto* c_sym = app.add_subcommand("symmetry", "search for a time-reversing involution");
    add_rule_source(c_sym, sym.source);
    c_sym->add_option("--max-span", sym.max_span, "largest reversal span tried")->check(CLI::Range(0, 16));
    c_sym->add_option("--budget", sym.budget, "search node cap (default: TSCA_BUDGET or 50000000)");
    c_sym->add_option("--threads", sym.threads, "worker threads")->check(CLI::Range(1u, 256u));
    c_sym->add_option("--out", sym.out, "output directory");

    AdditiveArgs add;
    auto* c_add = app.add_subcommand("additive", "solve for additive involutions");
    c_add->add_option("--m", add.m, "modulus")->required();
    c_add->add_option("--radius", add.radius, "radius");
    c_add->add_option("--out", add.out, "output directory");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "run a 1D or 2D simulation");
    c_sim->add_option("system", sim.system, "ant, billiard, hedlund, rule or zoo");
    c_sim->add_option("--scenario", sim.scenario_file, "scenario or manifest JSON");
    c_sim->add_option("--steps", sim.steps, "number of steps");
    c_sim->add_option("--reverse-at", sim.reverse_at, "reversal self-test horizon");
    c_sim->add_option("--seed", sim.seed, "seed for --random");
    c_sim->add_flag("--random", sim.random, "random initial configuration");
    c_sim->add_flag("--text", sim.text, "also write plain-text renderings");
    c_sim->add_flag("--alternating", sim.alternating, "also trace the two-involution orbit");
    c_sim->add_option("--width", sim.width, "torus width");
    c_sim->add_option("--height", sim.height, "torus height");
    c_sim->add_option("--n", sim.n, "cyclic configuration length");
    c_sim->add_option("--turn", sim.turn, "ant turn convention: white-right or black-right");
    c_sim->add_option("--rule", sim.rule_file, "rule JSON for system 'rule'");
    c_sim->add_option("--reversal", sim.reversal_file, "reversal rule JSON");
    c_sim->add_option("--zoo", sim.zoo_name, "zoo entry for system 'zoo'");
    c_sim->add_option("--out", sim.out, "output directory");

    std::string zoo_out = "tsca-out/zoo";
    auto* c_zoo = app.add_subcommand("zoo", "catalogue of example rules");
    c_zoo->require_subcommand(1);
    auto* c_zoo_list = c_zoo->add_subcommand("list", "print entries and verified claims");
    auto* c_zoo_export = c_zoo->add_subcommand("export", "write rule and certificate files");
    c_zoo_export->add_option("--out", zoo_out, "output directory");

    std::string verify_file;
    auto* c_verify = app.add_subcommand("verify", "re-check a certificate, report or manifest from disk");
    c_verify->add_option("file", verify_file, "JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (c_inv->parsed()) {
            return cmd_involutions(inv);
        }
        if (c_sym->parsed()) {
            return cmd_symmetry(sym);
        }
        if (c_add->parsed()) {
            return cmd_additive(add);
        }
        if (c_sim->parsed()) {
            if (sim.system.empty() == sim.scenario_file.empty()) {
                throw InvalidInput("give either a system or --scenario");
            }
            return cmd_simulate(sim, *c_sim);
        }
        if (c_zoo_list->parsed()) {
            return cmd_zoo_list();
        }
        if (c_zoo_export->parsed()) {
            return cmd_zoo_export(zoo_out);
        }
        if (c_verify->parsed()) {
            return cmd_verify(verify_file);
        }
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const NotBijective& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExhausted;
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kVerification;
    } catch (const Json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kInvalid;
}
