#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsca/rule.hpp"

namespace tsca {

// Elementary CA in Wolfram numbering: the tuple (x_{-1}, x_0, x_1) read as a
// 3-bit number b selects bit b of n.
LocalRule1D eca(int n);
// Inverse of eca() for binary rules whose minimized neighborhood lies in {-1, 0, 1}.
std::optional<int> eca_number(const LocalRule1D& rule);

LocalRule1D negation_rule();
// F(x)_i = x_{i+k}. shift(1) moves patterns to the left.
LocalRule1D shift(int k, Alphabet m = Alphabet{2});

struct HedlundPair {
    // Cellwise negation.
    LocalRule1D alpha;
    // Negates x_0 iff (x_{-1}, x_1, x_2) = (1, 0, 1).
    LocalRule1D beta;
    // alpha∘beta, minimized.
    LocalRule1D composite;
};

HedlundPair hedlund_pair();

struct PermutativeExample {
    // On {0,1,2} with offsets {-r, 0}: swaps 1 and 2 at x_0 iff x_{-r} = 0.
    LocalRule1D rule;
    // Same swap iff x_{-r} != 0.
    LocalRule1D partner;
};

PermutativeExample permutative_example(int r);

// (2(x_{-1} + x_1) + 3 x_0) mod 4
LocalRule1D additive_example();

struct Annotation {
    std::string claim;
    // Why the claim holds and which operation re-checked it.
    std::string basis;
};

struct ZooEntry {
    std::string name;
    std::string description;
    LocalRule1D rule;
    std::vector<Annotation> annotations;
    // "inverse", "reversal", "partner", ...
    std::map<std::string, LocalRule1D> companions;
};

// Built once; every annotation is re-verified on first access and a failing
// one throws VerificationFailure naming the entry and claim.
const std::vector<ZooEntry>& zoo();
const ZooEntry& zoo_entry(const std::string& name);

} // namespace tsca
