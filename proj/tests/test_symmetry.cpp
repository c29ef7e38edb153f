#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "tsca/symmetry.hpp"
#include "tsca/zoo.hpp"

using namespace tsca;

namespace {

const Alphabet two(2);

bool valid(const CertificateResult& r) {
    return std::holds_alternative<SymmetryCertificate>(r);
}

SymmetryCertificate cert_of(const LocalRule1D& f, const LocalRule1D& h) {
    return expect_certificate(verify_certificate(f, h), "test");
}

// Every binary involution with a contiguous window of span <= s containing 0.
std::vector<LocalRule1D> small_involutions(int s) {
    std::vector<LocalRule1D> out;
    for (int span = 0; span <= s; ++span) {
        for (int a = -span; a <= 0; ++a) {
            for (auto& h : oracle::all_involutions(2, Neighborhood::window(a, a + span))) {
                out.push_back(std::move(h));
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("verify_certificate examples") {
    const HedlundPair hp = hedlund_pair();
    CHECK(valid(verify_certificate(negation_rule(), identity_rule(two))));
    const auto hed = verify_certificate(hp.composite, hp.beta);
    REQUIRE(valid(hed));
    const auto& c = std::get<SymmetryCertificate>(hed);
    CHECK(equal(c.companion(), hp.alpha));
    CHECK(equal(c.inverse(), compose(hp.beta, hp.alpha)));
    for (const auto& check : c.log().checks) {
        CHECK(check.passed);
    }
    CHECK_FALSE(c.log().table_sizes.empty());

    const auto shift_id = verify_certificate(shift(1), identity_rule(two));
    REQUIRE_FALSE(valid(shift_id));
    CHECK(std::get<InvalidCertificate>(shift_id).failed == "F∘H is not an involution");

    const auto bad_h = verify_certificate(eca(51), eca(110));
    REQUIRE_FALSE(valid(bad_h));
    CHECK(std::get<InvalidCertificate>(bad_h).failed == "H is not an involution");

    CHECK_THROWS_AS(verify_certificate(identity_rule(Alphabet(3)), identity_rule(two)), AlphabetMismatch);
    CHECK_THROWS_AS(expect_certificate(shift_id, "ctx"), VerificationFailure);
}

TEST_CASE("certificate validity matches the oracle over small involution pairs") {
    // F = G∘H for involutions G, H is always certified by H, and the companion
    // recovers G. For arbitrary F, validity agrees with the cellwise oracle.
    const auto invs = small_involutions(2);
    REQUIRE(invs.size() >= 4);
    std::mt19937_64 rng(21);
    for (const auto& g : invs) {
        for (const auto& h : invs) {
            const LocalRule1D f = compose(g, h);
            const auto r = verify_certificate(f, h);
            REQUIRE(valid(r));
            CHECK(equal(std::get<SymmetryCertificate>(r).companion(), g));
        }
    }
    for (int n = 0; n < 256; ++n) {
        for (const auto& h : invs) {
            const bool expected = oracle::is_involution(h) && oracle::square_of_composite_is_identity(eca(n), h) &&
                                  oracle::same_map(compose(compose(h, eca(n)), compose(h, eca(n))),
                                                   identity_rule(two));
            CHECK_MESSAGE(valid(verify_certificate(eca(n), h)) == expected, "ECA ", n);
        }
    }
}

TEST_CASE("find_symmetry examples") {
    const auto r51 = find_symmetry(eca(51), 2);
    REQUIRE(std::holds_alternative<SymmetryCertificate>(r51));
    CHECK(is_identity(std::get<SymmetryCertificate>(r51).reversal()));

    const auto rs = find_symmetry(shift(1), 2);
    REQUIRE(std::holds_alternative<SearchExhausted>(rs));
    CHECK(std::get<SearchExhausted>(rs).bound_covered);
    CHECK(std::get<SearchExhausted>(rs).max_span == 2);

    const auto rh = find_symmetry(hedlund_pair().composite, 3);
    REQUIRE(std::holds_alternative<SymmetryCertificate>(rh));
    const auto& c = std::get<SymmetryCertificate>(rh);
    CHECK(valid(verify_certificate(c.rule(), c.reversal())));

    const auto starved = find_symmetry(shift(1), 3, 1);
    REQUIRE(std::holds_alternative<SearchExhausted>(starved));
    CHECK_FALSE(std::get<SearchExhausted>(starved).bound_covered);
    CHECK_THROWS_AS(find_symmetry(shift(1), -1), InvalidInput);
}

TEST_CASE("find_symmetry is complete against brute force on every ECA") {
    const auto invs = small_involutions(2);
    for (int n = 0; n < 256; ++n) {
        const LocalRule1D f = eca(n);
        bool brute = false;
        for (const auto& h : invs) {
            if (oracle::square_of_composite_is_identity(f, h)) {
                brute = true;
                break;
            }
        }
        const auto r = find_symmetry(f, 2);
        CHECK_MESSAGE(std::holds_alternative<SymmetryCertificate>(r) == brute, "ECA ", n);
    }
    // The reversible ECA: identity and negation are involutions; the other four
    // are shifts, possibly negated, and have no reversal in this range.
    for (int n : {51, 204}) {
        CHECK_MESSAGE(std::holds_alternative<SymmetryCertificate>(find_symmetry(eca(n), 2)), "ECA ", n);
    }
    for (int n : {15, 85, 170, 240}) {
        CHECK(find_inverse(eca(n), 0).has_value());
        const auto r = find_symmetry(eca(n), 2);
        REQUIRE(std::holds_alternative<SearchExhausted>(r));
        CHECK(std::get<SearchExhausted>(r).bound_covered);
    }
}

TEST_CASE("find_symmetry agrees across thread counts") {
    const LocalRule1D f = hedlund_pair().composite;
    const auto a = find_symmetry(f, 3, 50'000'000, 1);
    const auto b = find_symmetry(f, 3, 50'000'000, 3);
    REQUIRE(std::holds_alternative<SymmetryCertificate>(a));
    REQUIRE(std::holds_alternative<SymmetryCertificate>(b));
    CHECK(std::get<SymmetryCertificate>(a).reversal() == std::get<SymmetryCertificate>(b).reversal());
}

TEST_CASE("inverse_certificate") {
    const auto neg = inverse_certificate(cert_of(negation_rule(), identity_rule(two)));
    CHECK(equal(neg.rule(), negation_rule()));
    CHECK(equal(neg.reversal(), negation_rule()));
    CHECK(is_identity(neg.companion()));

    const HedlundPair hp = hedlund_pair();
    const auto c = cert_of(hp.composite, hp.beta);
    const auto inv = inverse_certificate(c);
    CHECK(equal(inv.rule(), compose(hp.beta, hp.alpha)));
    CHECK(equal(inv.reversal(), hp.alpha));
    const auto back = inverse_certificate(inv);
    CHECK(equal(back.rule(), hp.composite));
    CHECK(equal(back.reversal(), hp.beta));
}

TEST_CASE("power_certificate") {
    const HedlundPair hp = hedlund_pair();
    const auto c = cert_of(hp.composite, hp.beta);
    CHECK(equal(power_certificate(c, 1).rule(), c.rule()));
    const auto zero = power_certificate(c, 0);
    CHECK(is_identity(zero.rule()));
    CHECK(equal(zero.reversal(), hp.beta));
    const auto sq = power_certificate(c, 2);
    const LocalRule1D f2 = compose(hp.composite, hp.composite);
    CHECK(equal(sq.rule(), f2));
    CHECK(oracle::square_of_composite_is_identity(minimize_neighborhood(f2), hp.beta));
    const auto neg = power_certificate(c, -1);
    CHECK(equal(neg.rule(), compose(hp.beta, hp.alpha)));
    CHECK(is_identity(compose(power_certificate(c, -2).rule(), sq.rule())));
}

TEST_CASE("radius0_symmetry examples") {
    const auto id = radius0_symmetry({0, 1, 2});
    CHECK(is_identity(id.companion));
    CHECK(is_identity(id.reversal));

    const auto cyc = radius0_symmetry({1, 2, 0});
    CHECK(cyc.companion.table() == std::vector<State>{2, 1, 0});
    CHECK(cyc.reversal.table() == std::vector<State>{1, 0, 2});
    CHECK(compose(cyc.companion, cyc.reversal).table() == std::vector<State>{1, 2, 0});

    const auto mixed = radius0_symmetry({1, 0, 2});
    CHECK(is_involution(mixed.companion));
    CHECK(is_involution(mixed.reversal));
    CHECK(compose(mixed.companion, mixed.reversal).table() == std::vector<State>{1, 0, 2});

    CHECK_THROWS_AS(radius0_symmetry({0, 0, 1}), InvalidInput);
    CHECK_THROWS_AS(radius0_symmetry({}), InvalidInput);
}

TEST_CASE("radius0_symmetry on every permutation up to seven states") {
    for (std::uint32_t n = 1; n <= 7; ++n) {
        std::vector<State> p(n);
        for (State i = 0; i < n; ++i) {
            p[i] = i;
        }
        do {
            const auto d = radius0_symmetry(p);
            const auto& g = d.companion.table();
            const auto& h = d.reversal.table();
            for (State x = 0; x < n; ++x) {
                CHECK(g[g[x]] == x);
                CHECK(h[h[x]] == x);
                CHECK(g[h[x]] == p[x]);
            }
        } while (std::next_permutation(p.begin(), p.end()));
    }
}

TEST_CASE("conjugacy") {
    const auto neg = cert_of(negation_rule(), identity_rule(two));
    const auto same = conjugate_certificate(Conjugacy::identity(two), neg);
    CHECK(same.rule() == neg.rule());
    CHECK(same.reversal() == neg.reversal());

    // Relabel {0,1,2} by the 3-cycle and conjugate a transposition.
    const auto t = cert_of(LocalRule1D(Alphabet(3), Neighborhood{0}, {1, 0, 2}), identity_rule(Alphabet(3)));
    const auto relabelled = conjugate_certificate(Conjugacy::relabel({1, 2, 0}), t);
    // phi(x) = x+1; F = phi⁻¹∘T∘phi swaps 0 and 2.
    CHECK(relabelled.rule().table() == std::vector<State>{2, 1, 0});
    CHECK(is_identity(relabelled.companion()) == false);
    CHECK(is_identity(relabelled.reversal()));

    // The pair recoding (x, y) ↦ (y, x) on a product certificate.
    const ProductCA prod = product_ca(shift(1), shift(-1));
    std::vector<State> flip(4);
    for (State x = 0; x < 2; ++x) {
        for (State y = 0; y < 2; ++y) {
            flip[x * 2 + y] = y * 2 + x;
        }
    }
    const auto moved = conjugate_certificate(Conjugacy::relabel(flip), prod.certificate);
    CHECK(valid(verify_certificate(moved.rule(), moved.reversal())));

    CHECK_THROWS_AS(Conjugacy(shift(1), shift(1)), InvalidInput);
    CHECK_THROWS_AS(Conjugacy::relabel({0, 0}), InvalidInput);
    CHECK_THROWS_AS(conjugate_certificate(Conjugacy::identity(Alphabet(3)), neg), AlphabetMismatch);
}

TEST_CASE("product_ca") {
    const ProductCA id = product_ca(identity_rule(two), identity_rule(two));
    CHECK(is_identity(id.rule));
    CHECK(id.certificate.reversal().table() == std::vector<State>{0, 2, 1, 3});

    const ProductCA sh = product_ca(shift(1), shift(-1));
    CHECK(sh.certificate.reversal().table() == std::vector<State>{0, 2, 1, 3});

    const ProductCA p51 = product_ca(eca(51), eca(51));
    std::mt19937_64 rng(3);
    const CyclicConfig x = oracle::random_config(rng, 2, 12);
    const CyclicConfig y = oracle::random_config(rng, 2, 12);
    std::vector<State> pairs(12);
    for (std::size_t i = 0; i < 12; ++i) {
        pairs[i] = x[i] * 2 + y[i];
    }
    const OrbitRecord joint = orbit(p51.rule, CyclicConfig(pairs), 5);
    const OrbitRecord alone = orbit(eca(51), x, 5);
    for (std::size_t t = 0; t <= 5; ++t) {
        CHECK(apply(p51.project_first, joint.configs[t]) == alone.configs[t]);
    }
    CHECK_THROWS_AS(product_ca(shift(1), shift(1)), InvalidInput);
    CHECK_THROWS_AS(product_ca(shift(1), shift(-1, Alphabet(3))), AlphabetMismatch);
}

TEST_CASE("partitioned_ca") {
    const PartitionedCA plain = partitioned_ca(2, {0, 1, 2, 3});
    CHECK(equal(plain.rule, plain.exchange));
    CHECK(is_involution(plain.rule));
    CHECK(is_involution(plain.exchange));

    const PartitionedCA swapped = partitioned_ca(2, {0, 2, 1, 3});
    CHECK(equal(swapped.certificate.companion(), swapped.block));

    // (a, b) ↦ (1-b, 1-a)
    std::vector<State> sn(4);
    for (State a = 0; a < 2; ++a) {
        for (State b = 0; b < 2; ++b) {
            sn[a * 2 + b] = (1 - b) * 2 + (1 - a);
        }
    }
    const PartitionedCA negswap = partitioned_ca(2, sn);
    CHECK(is_involution(negswap.block));
    CHECK_FALSE(is_involution(negswap.rule));

    // The exchange hands cell i the right half of i-1 and the left half of i+1.
    const CyclicConfig c{0 * 2 + 1, 0 * 2 + 0, 1 * 2 + 0};
    CHECK(apply(plain.exchange, c) == CyclicConfig{0 * 2 + 0, 1 * 2 + 1, 0 * 2 + 0});

    CHECK_THROWS_AS(partitioned_ca(2, {1, 2, 3, 0}), InvalidInput);
    CHECK_THROWS_AS(partitioned_ca(2, {0, 1, 2}), InvalidInput);
}

TEST_CASE("periodic embedding") {
    const PeriodicEmbedding one = periodic_embedding(identity_rule(two), 1);
    CHECK(is_identity(one.embedding));
    CHECK(is_identity(one.rotation));

    const PeriodicEmbedding neg = periodic_embedding(negation_rule(), 2);
    CHECK(neg.embedding.table() == std::vector<State>{1, 2});
    CHECK(neg.rotation.table() == std::vector<State>{0, 2, 1, 3});
    CHECK(equal(compose(neg.embedding, negation_rule()), compose(neg.rotation, neg.embedding)));

    CHECK_THROWS_AS(periodic_embedding(eca(110), 2), InvalidInput);
    CHECK_THROWS_AS(periodic_embedding(shift(1), 3), InvalidInput);
}

TEST_CASE("radius-0 involutions need not preserve the embedded image") {
    // For p = 2 the rotation is itself an involution and the image is invariant.
    const PeriodicEmbedding neg = periodic_embedding(negation_rule(), 2);
    const auto d2 = radius0_symmetry(neg.rotation.table());
    CHECK_FALSE(find_embedding_escape(neg, d2.companion, 6).has_value());
    CHECK_FALSE(find_embedding_escape(neg, d2.reversal, 6).has_value());

    // Period 3: F = S∘R∘S with R = +1 mod 3 and S the radius-1 swap of 1, 2.
    const LocalRule1D psi = permutative_example(1).rule;
    const LocalRule1D plus(Alphabet(3), Neighborhood{0}, {1, 2, 0});
    const LocalRule1D f = minimize_neighborhood(compose(psi, compose(plus, psi)));
    const PeriodicEmbedding emb = periodic_embedding(f, 3);
    CHECK(equal(compose(emb.embedding, f), compose(emb.rotation, emb.embedding)));
    const auto d3 = radius0_symmetry(emb.rotation.table());
    const auto esc = find_embedding_escape(emb, d3.companion, 4);
    REQUIRE(esc.has_value());
    CHECK(esc->source == CyclicConfig{0, 1});
    CHECK(esc->image == CyclicConfig{8, 10});
    CHECK(esc->moved == CyclicConfig{20, 4});
    // No preimage of the moved point, checked exhaustively at its length.
    oracle::for_each_word(3, esc->moved.size(), [&](const oracle::Cells& w) {
        CHECK(apply(emb.embedding, CyclicConfig(w)) != esc->moved);
        return true;
    });
}

TEST_CASE("alternating orbit") {
    const auto idc = cert_of(identity_rule(two), identity_rule(two));
    const auto tr = alternating_orbit(idc, CyclicConfig{1, 0, 1}, 4);
    for (const auto& c : tr.unprimed) {
        CHECK(c == CyclicConfig{1, 0, 1});
    }

    const HedlundPair hp = hedlund_pair();
    const auto c = cert_of(hp.composite, hp.beta);
    std::mt19937_64 rng(4);
    const CyclicConfig c0 = oracle::random_config(rng, 2, 16);
    const auto h = alternating_orbit(c, c0, 32);
    const LocalRule1D inv = *find_inverse(hp.composite, 4);
    for (std::size_t t = 0; t < 32; ++t) {
        CHECK(h.unprimed[t + 1].cells() == oracle::step(hp.composite, h.unprimed[t].cells()));
        CHECK(h.primed[t + 1].cells() == oracle::step(inv, h.primed[t].cells()));
    }

    const ProductCA sh = product_ca(shift(1), shift(-1));
    std::vector<State> pairs(8);
    for (std::size_t i = 0; i < 8; ++i) {
        pairs[i] = static_cast<State>((i == 0) * 2 + (i == 0));
    }
    const auto ps = alternating_orbit(sh.certificate, CyclicConfig(pairs), 3);
    // Unprimed: first track moves left, second right.
    const CyclicConfig first = apply(sh.project_first, ps.unprimed[3]);
    const CyclicConfig second = apply(sh.project_second, ps.unprimed[3]);
    CHECK(first[5] == 1);
    CHECK(second[3] == 1);
}

TEST_CASE("certificate JSON") {
    const HedlundPair hp = hedlund_pair();
    const auto c = cert_of(hp.composite, hp.beta);
    const Json j = certificate_to_json(c);
    CHECK(j.contains("verification"));
    const auto back = certificate_from_json(Json::parse(dump_json(j)));
    REQUIRE(valid(back));
    CHECK(std::get<SymmetryCertificate>(back).companion() == c.companion());

    Json tampered = j;
    tampered["G"] = rule_to_json(identity_rule(two));
    CHECK_FALSE(valid(certificate_from_json(tampered)));
    Json wrong_h = j;
    wrong_h["H"] = rule_to_json(identity_rule(two));
    CHECK_FALSE(valid(certificate_from_json(wrong_h)));
    CHECK_THROWS_AS(certificate_from_json(Json::object()), InvalidInput);
}
