#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsca/errors.hpp"

namespace tsca {

using State = std::uint32_t;

// Hard cap on rule tables, word spaces and cycle permutations.
inline constexpr std::uint64_t kMaxTableEntries = std::uint64_t{1} << 24;

// m^k, throwing BudgetExceeded once the result passes `limit`.
std::uint64_t checked_pow(std::uint64_t m, std::size_t k, std::uint64_t limit = kMaxTableEntries);

struct Alphabet {
    std::uint32_t size = 1;

    constexpr Alphabet() = default;
    explicit Alphabet(std::uint32_t m) : size(m) {
        if (m == 0) {
            throw InvalidInput("alphabet size must be positive");
        }
    }

    bool contains(State s) const { return s < size; }
    friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

// Strictly increasing list of integer offsets.
class Neighborhood {
public:
    Neighborhood() = default;
    explicit Neighborhood(std::vector<int> offsets);
    Neighborhood(std::initializer_list<int> offsets) : Neighborhood(std::vector<int>(offsets)) {}

    // Contiguous offsets lo, lo+1, ..., hi.
    static Neighborhood window(int lo, int hi);

    const std::vector<int>& offsets() const { return offsets_; }
    std::size_t size() const { return offsets_.size(); }
    bool empty() const { return offsets_.empty(); }
    int min() const { return offsets_.front(); }
    int max() const { return offsets_.back(); }
    // max - min; zero for the empty neighborhood.
    int span() const { return empty() ? 0 : max() - min(); }
    bool contains(int offset) const;
    // Position of `offset` in the sorted list; throws if absent.
    std::size_t position(int offset) const;

    friend bool operator==(const Neighborhood&, const Neighborhood&) = default;

private:
    std::vector<int> offsets_;
};

Neighborhood sumset(const Neighborhood& a, const Neighborhood& b);
Neighborhood merge(const Neighborhood& a, const Neighborhood& b);

/// Local rule of a one-dimensional sliding block code.
///
/// The table is indexed by the lexicographic rank of the neighbor tuple read in
/// offset order, with the smallest offset as the most significant digit. For
/// m = 2 and offsets {-1, 0, 1} this is exactly the Wolfram numbering.
///
/// Most rules are endomorphisms (input alphabet == output alphabet). Block
/// recodings such as conjugacies and embeddings may change the alphabet.
class LocalRule1D {
public:
    LocalRule1D(Alphabet alphabet, Neighborhood nbhd, std::vector<State> table);
    LocalRule1D(Alphabet input, Alphabet output, Neighborhood nbhd, std::vector<State> table);

    template <class Fn>
    static LocalRule1D from_function(Alphabet input, Alphabet output, Neighborhood nbhd, Fn&& fn);

    const Alphabet& alphabet() const { return input_; }
    const Alphabet& input_alphabet() const { return input_; }
    const Alphabet& output_alphabet() const { return output_; }
    bool is_endomorphism() const { return input_ == output_; }
    const Neighborhood& neighborhood() const { return nbhd_; }
    const std::vector<State>& table() const { return table_; }

    std::size_t index_of(std::span<const State> tuple) const;
    State at(std::size_t index) const { return table_[index]; }
    State operator()(std::span<const State> tuple) const { return table_[index_of(tuple)]; }

    // Representation equality: same alphabets, same neighborhood, same table.
    // Use tsca::equal() to compare global maps.
    friend bool operator==(const LocalRule1D&, const LocalRule1D&) = default;

private:
    Alphabet input_;
    Alphabet output_;
    Neighborhood nbhd_;
    std::vector<State> table_;
};

// Spatially periodic configuration: cell i has neighbors (i + o) mod n.
class CyclicConfig {
public:
    CyclicConfig() = default;
    explicit CyclicConfig(std::vector<State> cells);
    CyclicConfig(std::initializer_list<State> cells) : CyclicConfig(std::vector<State>(cells)) {}

    std::size_t size() const { return cells_.size(); }
    State operator[](std::size_t i) const { return cells_[i]; }
    // Cell at i mod n, for any integer i.
    State wrapped(std::int64_t i) const;
    const std::vector<State>& cells() const { return cells_; }

    friend auto operator<=>(const CyclicConfig&, const CyclicConfig&) = default;

private:
    std::vector<State> cells_;
};

struct OrbitRecord {
    std::vector<CyclicConfig> configs;
    // First repeat inside the recorded window: configs[transient] == configs[transient + period].
    std::optional<std::size_t> transient;
    std::optional<std::size_t> period;
};

enum class OrderStatus { Found, ExceedsBound };

struct CycleOrder {
    OrderStatus status = OrderStatus::Found;
    // The order when Found; unspecified otherwise.
    std::uint64_t order = 0;
};

LocalRule1D identity_rule(Alphabet m);
LocalRule1D constant_rule(Alphabet m, State value);

CyclicConfig apply(const LocalRule1D& rule, const CyclicConfig& c);

// Rule of g∘h (h applied first). Neighborhood is the sumset of both.
LocalRule1D compose(const LocalRule1D& g, const LocalRule1D& h);

// Same global map on the smallest neighborhood (every remaining offset essential).
LocalRule1D minimize_neighborhood(const LocalRule1D& rule);

// Rewrite `rule` over a neighborhood containing its own.
LocalRule1D extend_to(const LocalRule1D& rule, const Neighborhood& target);

// Exact equality of global maps on the full shift, by comparing tables on the
// union neighborhood.
bool equal(const LocalRule1D& f, const LocalRule1D& g);

bool is_identity(const LocalRule1D& f);

// rule^k for k >= 0, minimized after every step.
LocalRule1D power(const LocalRule1D& rule, std::uint64_t k);

// Two-sided inverse whose neighborhood spans at most max_span, minimized.
// nullopt only means none exists within the bound.
std::optional<LocalRule1D> find_inverse(const LocalRule1D& f, int max_span);

OrbitRecord orbit(const LocalRule1D& rule, const CyclicConfig& c0, std::size_t steps);

// Least p <= bound with rule^p = id on all length-n cyclic configurations.
// Throws NotBijective if the rule is not a permutation there.
CycleOrder order_on_cycle(const LocalRule1D& rule, std::size_t n, std::uint64_t bound);

std::string describe(const LocalRule1D& rule);

template <class Fn>
LocalRule1D LocalRule1D::from_function(Alphabet input, Alphabet output, Neighborhood nbhd, Fn&& fn) {
    const std::size_t k = nbhd.size();
    const auto size = checked_pow(input.size, k);
    std::vector<State> table(size);
    std::vector<State> tuple(k, 0);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        table[idx] = fn(std::span<const State>(tuple));
        for (std::size_t d = k; d-- > 0;) {
            if (++tuple[d] < input.size) {
                break;
            }
            tuple[d] = 0;
        }
    }
    return LocalRule1D(input, output, std::move(nbhd), std::move(table));
}

} // namespace tsca
