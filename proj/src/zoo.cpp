#include "tsca/zoo.hpp"

#include <functional>

#include "tsca/involution.hpp"
#include "tsca/symmetry.hpp"

namespace tsca {

LocalRule1D eca(int n) {
    if (n < 0 || n > 255) {
        throw InvalidInput("ECA number must be in 0..255, got " + std::to_string(n));
    }
    std::vector<State> table(8);
    for (int b = 0; b < 8; ++b) {
        table[static_cast<std::size_t>(b)] = static_cast<State>((n >> b) & 1);
    }
    return LocalRule1D(Alphabet(2), Neighborhood{-1, 0, 1}, std::move(table));
}

std::optional<int> eca_number(const LocalRule1D& rule) {
    if (rule.input_alphabet() != Alphabet(2) || !rule.is_endomorphism()) {
        return std::nullopt;
    }
    const LocalRule1D m = minimize_neighborhood(rule);
    for (int o : m.neighborhood().offsets()) {
        if (o < -1 || o > 1) {
            return std::nullopt;
        }
    }
    const LocalRule1D full = extend_to(m, Neighborhood{-1, 0, 1});
    int n = 0;
    for (int b = 0; b < 8; ++b) {
        n |= static_cast<int>(full.at(static_cast<std::size_t>(b))) << b;
    }
    return n;
}

LocalRule1D negation_rule() {
    return LocalRule1D(Alphabet(2), Neighborhood{0}, {1, 0});
}

LocalRule1D shift(int k, Alphabet m) {
    std::vector<State> table(m.size);
    for (State s = 0; s < m.size; ++s) {
        table[s] = s;
    }
    return LocalRule1D(m, Neighborhood{k}, std::move(table));
}

HedlundPair hedlund_pair() {
    LocalRule1D alpha = negation_rule();
    LocalRule1D beta = LocalRule1D::from_function(Alphabet(2), Alphabet(2), Neighborhood{-1, 0, 1, 2},
                                                  [](std::span<const State> x) {
                                                      const bool fire = x[0] == 1 && x[2] == 0 && x[3] == 1;
                                                      return fire ? 1 - x[1] : x[1];
                                                  });
    LocalRule1D composite = minimize_neighborhood(compose(alpha, beta));
    return {std::move(alpha), std::move(beta), std::move(composite)};
}

PermutativeExample permutative_example(int r) {
    if (r < 1) {
        throw InvalidInput("permutative_example: radius must be at least 1");
    }
    const Alphabet m(3);
    auto swap12 = [](State v) -> State { return v == 1 ? 2 : v == 2 ? 1 : v; };
    LocalRule1D rule = LocalRule1D::from_function(m, m, Neighborhood{-r, 0}, [&](std::span<const State> x) {
        return x[0] == 0 ? swap12(x[1]) : x[1];
    });
    LocalRule1D partner = LocalRule1D::from_function(m, m, Neighborhood{-r, 0}, [&](std::span<const State> x) {
        return x[0] != 0 ? swap12(x[1]) : x[1];
    });
    return {std::move(rule), std::move(partner)};
}

LocalRule1D additive_example() {
    return additive_rule(AdditiveCoefficients(4, 1, {2, 3, 2}));
}

// ------------------------------------------------------------------ registry

namespace {

struct Claim {
    Annotation annotation;
    std::function<bool(const ZooEntry&)> check;
};

Claim involution_claim(bool expected) {
    return {{expected ? "involution" : "not an involution", "square compared with the identity table"},
            [expected](const ZooEntry& e) { return is_involution(e.rule) == expected; }};
}

Claim reversible_claim() {
    return {{"reversible", "stored inverse verified two-sided by table comparison"}, [](const ZooEntry& e) {
                const auto& inv = e.companions.at("inverse");
                return is_identity(compose(inv, e.rule)) && is_identity(compose(e.rule, inv));
            }};
}

Claim symmetric_claim() {
    return {{"time-symmetric", "certificate with the stored reversal passes verify_certificate"},
            [](const ZooEntry& e) {
                return std::holds_alternative<SymmetryCertificate>(
                    verify_certificate(e.rule, e.companions.at("reversal")));
            }};
}

ZooEntry make_entry(std::string name, std::string description, LocalRule1D rule,
                    std::map<std::string, LocalRule1D> companions, const std::vector<Claim>& claims) {
    ZooEntry e{std::move(name), std::move(description), std::move(rule), {}, std::move(companions)};
    for (const auto& c : claims) {
        if (!c.check(e)) {
            throw VerificationFailure("zoo entry '" + e.name + "': claim '" + c.annotation.claim +
                                      "' failed (" + c.annotation.basis + ")");
        }
        e.annotations.push_back(c.annotation);
    }
    return e;
}

std::vector<ZooEntry> build_zoo() {
    std::vector<ZooEntry> z;
    const Alphabet two(2);
    const LocalRule1D id2 = identity_rule(two);
    const LocalRule1D neg = negation_rule();

    z.push_back(make_entry("identity", "ECA 204", eca(204), {{"inverse", id2}, {"reversal", id2}},
                           {involution_claim(true), reversible_claim(), symmetric_claim()}));
    z.push_back(make_entry("negation", "ECA 51", eca(51), {{"inverse", neg}, {"reversal", id2}},
                           {involution_claim(true), reversible_claim(), symmetric_claim()}));
    z.push_back(make_entry("eca110", "ECA 110", eca(110), {}, {involution_claim(false)}));

    for (int k : {1, -1}) {
        Claim not_symmetric{
            {"not time-symmetric",
             "theorem: every CA commutes with the shift, so (σ∘H)² = σ²∘H² = σ² for an involution H; "
             "σ² differs from the identity (table check)"},
            [](const ZooEntry& e) { return !is_identity(power(e.rule, 2)); }};
        z.push_back(make_entry(k == 1 ? "shift" : "shift-right", k == 1 ? "left shift x_{i+1}" : "right shift x_{i-1}",
                               shift(k), {{"inverse", shift(-k)}},
                               {involution_claim(false), reversible_claim(), not_symmetric}));
    }

    const HedlundPair hp = hedlund_pair();
    z.push_back(make_entry("hedlund-alpha", "negation", hp.alpha, {{"inverse", hp.alpha}, {"reversal", id2}},
                           {involution_claim(true), symmetric_claim()}));
    z.push_back(make_entry("hedlund-beta", "negate x_0 iff x_{-1} x_1 x_2 = 101", hp.beta,
                           {{"inverse", hp.beta}, {"reversal", id2}},
                           {involution_claim(true), reversible_claim(), symmetric_claim()}));
    {
        const LocalRule1D inverse = minimize_neighborhood(compose(hp.beta, hp.alpha));
        Claim companion_is_alpha{{"companion of the reversal beta is alpha", "minimized F∘beta compared with alpha"},
                                 [&hp](const ZooEntry& e) {
                                     const auto cert = verify_certificate(e.rule, hp.beta);
                                     const auto* c = std::get_if<SymmetryCertificate>(&cert);
                                     return c != nullptr && equal(c->companion(), hp.alpha);
                                 }};
        Claim unbounded_order{
            {"order on cycles grows past 2", "order_on_cycle over n <= 12 exceeds 2 (infinite order on the full shift)"},
            [](const ZooEntry& e) {
                for (std::size_t n = 1; n <= 12; ++n) {
                    const auto r = order_on_cycle(e.rule, n, 4 * n);
                    if (r.status == OrderStatus::ExceedsBound || r.order > 2) {
                        return true;
                    }
                }
                return false;
            }};
        z.push_back(make_entry("hedlund", "alpha∘beta", hp.composite,
                               {{"inverse", inverse}, {"reversal", hp.beta}, {"alpha", hp.alpha}, {"beta", hp.beta}},
                               {involution_claim(false), reversible_claim(), symmetric_claim(), companion_is_alpha,
                                unbounded_order}));
    }

    const LocalRule1D add = additive_example();
    z.push_back(make_entry("additive-mod4", "(2(x_{-1}+x_1) + 3x_0) mod 4", add,
                           {{"inverse", add}, {"reversal", identity_rule(Alphabet(4))}},
                           {involution_claim(true), reversible_claim(), symmetric_claim(),
                            {{"not left- or right-permutative", "permutativity test on the minimized rule"},
                             [](const ZooEntry& e) {
                                 return !is_left_permutative(e.rule) && !is_right_permutative(e.rule);
                             }}}));

    for (int r = 1; r <= 3; ++r) {
        const PermutativeExample pe = permutative_example(r);
        const LocalRule1D transposition(Alphabet(3), Neighborhood{0}, {0, 2, 1});
        Claim collapse{{"composed with the partner: radius-0 transposition (1 2)",
                        "minimized rule∘partner compared with the radius-0 table"},
                       [transposition](const ZooEntry& e) {
                           const LocalRule1D c = minimize_neighborhood(compose(e.rule, e.companions.at("partner")));
                           return c == transposition;
                       }};
        Claim right_perm{{"right-permutative, not left-permutative", "permutativity test on the minimized rule"},
                         [](const ZooEntry& e) {
                             return is_right_permutative(e.rule) && !is_left_permutative(e.rule);
                         }};
        const std::string suffix = "-r" + std::to_string(r);
        z.push_back(make_entry("permutative" + suffix, "swap 1,2 at x_0 iff x_{-r} = 0", pe.rule,
                               {{"inverse", pe.rule}, {"reversal", identity_rule(Alphabet(3))}, {"partner", pe.partner}},
                               {involution_claim(true), reversible_claim(), symmetric_claim(), collapse, right_perm}));
        z.push_back(make_entry("partner" + suffix, "swap 1,2 at x_0 iff x_{-r} != 0", pe.partner,
                               {{"inverse", pe.partner}, {"reversal", identity_rule(Alphabet(3))}},
                               {involution_claim(true), reversible_claim(), symmetric_claim()}));
    }
    return z;
}

} // namespace

const std::vector<ZooEntry>& zoo() {
    static const std::vector<ZooEntry> entries = build_zoo();
    return entries;
}

const ZooEntry& zoo_entry(const std::string& name) {
    for (const auto& e : zoo()) {
        if (e.name == name) {
            return e;
        }
    }
    throw InvalidInput("unknown zoo entry '" + name + "'");
}

} // namespace tsca
