#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tsca/rule.hpp"

namespace tsca {

struct AdditiveCoefficients {
    std::uint32_t modulus = 2;
    int radius = 0;
    // a_{-r}, ..., a_0, ..., a_r
    std::vector<State> coeffs;

    AdditiveCoefficients() = default;
    AdditiveCoefficients(std::uint32_t m, int r, std::vector<State> a);

    State at(int i) const { return coeffs[static_cast<std::size_t>(i + radius)]; }
    friend bool operator==(const AdditiveCoefficients&, const AdditiveCoefficients&) = default;
};

struct EnumerationSpec {
    Alphabet alphabet{2};
    Neighborhood neighborhood{0};
    // Extra acceptance test run on every verified involution (e.g. "(F∘H)² = id").
    std::function<bool(const LocalRule1D&)> accept;
    // Called once per accepted rule, possibly from worker threads (calls are serialized).
    std::function<void(const LocalRule1D&)> on_found;
    // Cap on search nodes, split evenly across partitions.
    std::uint64_t budget = 50'000'000;
    // The tree is split on the first `partition_depth` branching variables.
    std::size_t partition_depth = 0;
    unsigned threads = 1;
    // Stop once this many rules have been accepted (0 = no limit).
    std::size_t stop_after = 0;
};

struct SearchReport {
    Alphabet alphabet{2};
    Neighborhood neighborhood;
    // Sorted by table.
    std::vector<LocalRule1D> found;
    std::uint64_t nodes = 0;
    // "square": branches cut by an h(h(x))_0 != x_0 conflict, "diagonal": the
    // subset of those raised while fixing constant-word entries, "hook":
    // involutions rejected by the accept predicate.
    std::map<std::string, std::uint64_t> pruned;
    std::uint64_t budget = 0;
    // True when every branch was explored; `found` is then complete.
    bool exhausted = false;
    bool stopped_early = false;
};

bool is_involution(const LocalRule1D& f);

SearchReport enumerate_involutions(const EnumerationSpec& spec);

// Σ a_i x_i mod m over offsets -r..r.
LocalRule1D additive_rule(const AdditiveCoefficients& c);

// True iff Σ_i a_i a_{j-i} ≡ [j = 0] (mod m) for every j.
bool additive_square_is_identity(const AdditiveCoefficients& c);

std::vector<AdditiveCoefficients> solve_additive_involutions(std::uint32_t m, int r);

// Bijective in the leftmost (rightmost) essential neighbor for every fixing of
// the others. Evaluated on the minimized rule.
bool is_left_permutative(const LocalRule1D& f);
bool is_right_permutative(const LocalRule1D& f);

// Minimized neighborhood contained in {0, 1, 2, ...}.
bool is_one_way_right(const LocalRule1D& f);
bool is_one_way_left(const LocalRule1D& f);

} // namespace tsca
