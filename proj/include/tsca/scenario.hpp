#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsca/grid2d.hpp"
#include "tsca/rule.hpp"
#include "tsca/rule_io.hpp"

namespace tsca {

// Everything a simulation run depends on. Serialized into the run manifest so
// that a manifest can be replayed.
struct Scenario {
    // "ant", "billiard", "rule" or "zoo" ("hedlund" is read as zoo entry "hedlund").
    std::string system;
    std::size_t steps = 0;
    // Self-test: run k steps, apply the reversal, run k steps, apply it again
    // and compare with the start.
    std::optional<std::size_t> reverse_at;
    std::uint64_t seed = 0;
    bool random = false;
    // Also emit plain-text renderings.
    bool text = false;

    // 2D systems.
    int width = 256;
    int height = 256;
    TurnConvention turn = TurnConvention::WhiteRight;
    std::vector<std::array<int, 2>> balls;
    std::uint32_t density_percent = 25;

    // 1D systems.
    std::size_t n = 64;
    std::optional<CyclicConfig> initial;
    std::optional<LocalRule1D> rule;
    std::optional<LocalRule1D> reversal;
    std::string zoo_name;
    // Interleave c_t and H(c_t) rows via the certificate's two involutions.
    bool alternating = false;
};

Json scenario_to_json(const Scenario& s);
// Accepts a bare scenario or a manifest carrying one under "scenario".
Scenario scenario_from_json(const Json& j);

struct SimulationOutput {
    // File name → contents, in emission order.
    std::vector<std::pair<std::string, std::string>> files;
    Json summary;
    // Set when the scenario asked for the reversal self-test.
    std::optional<bool> reversal_ok;
};

SimulationOutput run_scenario(const Scenario& s);

// Writes every output plus summary.json and manifest.json into dir, each
// atomically. Returns the names written.
std::vector<std::string> write_simulation(const Scenario& s, const SimulationOutput& out,
                                          const std::filesystem::path& dir);

} // namespace tsca
