#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tsca/rule.hpp"
#include "tsca/rule_io.hpp"
#include "tsca/zoo.hpp"

using namespace tsca;

namespace {

const Alphabet two(2);

LocalRule1D wide_identity() {
    return LocalRule1D::from_function(two, two, Neighborhood{-1, 0, 1}, [](std::span<const State> x) { return x[1]; });
}

} // namespace

TEST_CASE("neighborhood basics") {
    const Neighborhood n{-2, 0, 3};
    CHECK(n.min() == -2);
    CHECK(n.max() == 3);
    CHECK(n.span() == 5);
    CHECK(n.position(3) == 2);
    CHECK(n.contains(0));
    CHECK_FALSE(n.contains(1));
    CHECK_THROWS_AS(n.position(1), std::out_of_range);
    CHECK_THROWS_AS(Neighborhood({1, 0}), InvalidInput);
    CHECK_THROWS_AS(Neighborhood({1, 1}), InvalidInput);
    CHECK(Neighborhood::window(-1, 1) == Neighborhood{-1, 0, 1});
    CHECK(sumset(Neighborhood{-1, 1}, Neighborhood{0, 2}) == Neighborhood{-1, 1, 3});
    CHECK(merge(Neighborhood{-1, 1}, Neighborhood{0, 1}) == Neighborhood{-1, 0, 1});
    CHECK(Neighborhood().span() == 0);
}

TEST_CASE("rule construction validates") {
    CHECK_THROWS_AS(Alphabet(0), InvalidInput);
    CHECK_THROWS_AS(LocalRule1D(two, Neighborhood{0}, {0}), InvalidInput);
    CHECK_THROWS_AS(LocalRule1D(two, Neighborhood{0}, {0, 2}), InvalidInput);
    CHECK_NOTHROW(LocalRule1D(two, Neighborhood{}, {1}));
}

TEST_CASE("table index is Wolfram order for ECA") {
    const LocalRule1D r = eca(110);
    for (State a = 0; a < 2; ++a) {
        for (State b = 0; b < 2; ++b) {
            for (State c = 0; c < 2; ++c) {
                const State t[3] = {a, b, c};
                const int bit = static_cast<int>(a * 4 + b * 2 + c);
                CHECK(r(t) == static_cast<State>((110 >> bit) & 1));
            }
        }
    }
}

TEST_CASE("apply examples") {
    const CyclicConfig c{0, 1, 1, 0, 1};
    CHECK(apply(identity_rule(two), c) == c);
    CHECK(apply(negation_rule(), CyclicConfig{0, 1, 1}) == CyclicConfig{1, 0, 0});
    // The second factor negates x_i iff x_{i-1} x_{i+1} x_{i+2} = 101. On 101010 every cell has
    // x_{i-1} = x_{i+1}, so the condition never fires.
    const CyclicConfig alt{1, 0, 1, 0, 1, 0};
    CHECK(apply(hedlund_pair().beta, alt) == alt);
    CHECK(apply(hedlund_pair().composite, alt) == CyclicConfig{0, 1, 0, 1, 0, 1});
    // 0110 at n=4: i=1 has (x0, x2, x3) = (0, 1, 0), no; i=3 has (x2, x0, x1) = (1, 0, 1), fires.
    CHECK(apply(hedlund_pair().beta, CyclicConfig{0, 1, 1, 0}) == CyclicConfig{0, 1, 1, 1});
    CHECK_THROWS_AS(apply(identity_rule(two), CyclicConfig{0, 2}), AlphabetMismatch);
    CHECK_THROWS_AS(CyclicConfig(std::vector<State>{}), InvalidInput);
}

TEST_CASE("apply agrees with the cellwise oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Neighborhood nb = trial % 2 ? Neighborhood{-2, 0, 1} : Neighborhood{-1, 3};
        const auto m = static_cast<std::uint32_t>(2 + trial % 2);
        const LocalRule1D f = oracle::random_rule(rng, m, nb);
        const CyclicConfig c = oracle::random_config(rng, m, 1 + rng() % 9);
        CHECK(apply(f, c).cells() == oracle::step(f, c.cells()));
    }
}

TEST_CASE("compose examples") {
    const LocalRule1D f = eca(30);
    CHECK(minimize_neighborhood(compose(identity_rule(two), f)) == f);
    CHECK(is_identity(compose(negation_rule(), negation_rule())));
    CHECK(compose(eca(30), eca(90)).neighborhood() == Neighborhood::window(-2, 2));
    CHECK_THROWS_AS(compose(identity_rule(Alphabet(3)), f), AlphabetMismatch);
}

TEST_CASE("apply of a composition is the composition of applies (exhaustive small n)") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const LocalRule1D g = oracle::random_rule(rng, 2, trial % 3 ? Neighborhood{-1, 0, 1} : Neighborhood{0, 2});
        const LocalRule1D h = oracle::random_rule(rng, 2, trial % 2 ? Neighborhood{-1, 1} : Neighborhood{1});
        const LocalRule1D gh = compose(g, h);
        for (std::size_t n = 1; n <= 7; ++n) {
            oracle::for_each_word(2, n, [&](const oracle::Cells& w) {
                const CyclicConfig c(w);
                CHECK(apply(gh, c) == apply(g, apply(h, c)));
                return true;
            });
        }
    }
}

TEST_CASE("apply of a composition (randomized, larger n and m)") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const LocalRule1D g = oracle::random_rule(rng, 3, Neighborhood{-1, 0, 1});
        const LocalRule1D h = oracle::random_rule(rng, 3, Neighborhood{-2, 1});
        const CyclicConfig c = oracle::random_config(rng, 3, 8 + rng() % 40);
        CHECK(apply(compose(g, h), c).cells() == oracle::step(g, oracle::step(h, c.cells())));
    }
}

TEST_CASE("compose is associative with the identity as unit") {
    std::mt19937_64 rng(7);
    const LocalRule1D id = identity_rule(two);
    for (int trial = 0; trial < 50; ++trial) {
        const LocalRule1D a = oracle::random_rule(rng, 2, Neighborhood{-1, 0});
        const LocalRule1D b = oracle::random_rule(rng, 2, Neighborhood{0, 1});
        const LocalRule1D c = oracle::random_rule(rng, 2, Neighborhood{-1, 1});
        CHECK(equal(compose(a, compose(b, c)), compose(compose(a, b), c)));
        CHECK(equal(compose(id, a), a));
        CHECK(equal(compose(a, id), a));
    }
}

TEST_CASE("minimize examples") {
    CHECK(minimize_neighborhood(wide_identity()) == identity_rule(two));
    const LocalRule1D neg01 =
        LocalRule1D::from_function(two, two, Neighborhood{0, 1}, [](std::span<const State> x) { return 1 - x[0]; });
    CHECK(minimize_neighborhood(neg01) == negation_rule());
    const LocalRule1D c = minimize_neighborhood(constant_rule(two, 1));
    CHECK(c.neighborhood().empty());
    CHECK(equal(c, constant_rule(two, 1)));
}

TEST_CASE("minimization preserves the map, is idempotent and minimal") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const auto m = static_cast<std::uint32_t>(2 + trial % 2);
        // Build rules that ignore a random subset of offsets.
        const Neighborhood nb{-2, -1, 0, 1, 2};
        const unsigned used = static_cast<unsigned>(rng() % 32);
        const LocalRule1D base = oracle::random_rule(rng, m, Neighborhood{-2, -1, 0, 1, 2});
        const LocalRule1D f = LocalRule1D::from_function(Alphabet(m), Alphabet(m), nb, [&](std::span<const State> x) {
            std::vector<State> y(x.begin(), x.end());
            for (std::size_t i = 0; i < 5; ++i) {
                if (!(used >> i & 1)) {
                    y[i] = 0;
                }
            }
            return base(y);
        });
        const LocalRule1D mf = minimize_neighborhood(f);
        CHECK(oracle::same_map(mf, f));
        CHECK(minimize_neighborhood(mf) == mf);
        for (int o : mf.neighborhood().offsets()) {
            CHECK((used >> static_cast<unsigned>(o + 2) & 1));
        }
        // Every remaining offset is essential: some pair of tuples differing
        // only there disagrees.
        const auto& offs = mf.neighborhood().offsets();
        for (std::size_t p = 0; p < offs.size(); ++p) {
            bool essential = false;
            oracle::for_each_word(m, offs.size(), [&](const oracle::Cells& w) {
                oracle::Cells v = w;
                for (State s = 0; s < m && !essential; ++s) {
                    v[p] = s;
                    essential = mf(v) != mf(w);
                }
                return !essential;
            });
            CHECK(essential);
        }
    }
}

TEST_CASE("equal examples and against the oracle") {
    const LocalRule1D f = eca(90);
    CHECK(equal(f, f));
    CHECK_FALSE(equal(identity_rule(two), negation_rule()));
    CHECK(equal(wide_identity(), identity_rule(two)));
    const LocalRule1D beta = hedlund_pair().beta;
    CHECK(equal(compose(beta, beta), identity_rule(two)));
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        const LocalRule1D a = oracle::random_rule(rng, 2, Neighborhood{0});
        const LocalRule1D b = oracle::random_rule(rng, 2, trial % 2 ? Neighborhood{0, 1} : Neighborhood{-1, 0});
        CHECK(equal(a, b) == oracle::same_map(a, b));
    }
    CHECK_THROWS_AS(equal(identity_rule(two), identity_rule(Alphabet(3))), AlphabetMismatch);
}

TEST_CASE("power") {
    CHECK(is_identity(power(negation_rule(), 0)));
    CHECK(power(negation_rule(), 3) == negation_rule());
    CHECK(power(shift(1), 3) == shift(3));
}

TEST_CASE("find_inverse examples") {
    CHECK(find_inverse(negation_rule(), 0) == negation_rule());
    CHECK(find_inverse(shift(1), 2) == shift(-1));
    CHECK(find_inverse(shift(2), 0) == shift(-2));
    CHECK(find_inverse(eca(110), 3) == std::nullopt);
    const HedlundPair hp = hedlund_pair();
    const auto inv = find_inverse(hp.composite, 4);
    REQUIRE(inv.has_value());
    CHECK(equal(*inv, compose(hp.beta, hp.alpha)));
    CHECK(is_identity(compose(*inv, hp.composite)));
    CHECK(is_identity(compose(hp.composite, *inv)));
}

TEST_CASE("find_inverse agrees with brute force on all ECA") {
    // An ECA with an inverse of span <= 2 exists exactly when some radius-1
    // rule g satisfies g∘f = f∘g = id.
    std::vector<LocalRule1D> candidates;
    for (int w = 0; w < 256; ++w) {
        candidates.push_back(eca(w));
    }
    for (int n = 0; n < 256; ++n) {
        const LocalRule1D f = eca(n);
        bool brute = false;
        for (const auto& g : candidates) {
            if (oracle::same_map(compose(g, f), identity_rule(two)) && oracle::same_map(compose(f, g), identity_rule(two))) {
                brute = true;
                break;
            }
        }
        const auto found = find_inverse(f, 2);
        CHECK_MESSAGE(found.has_value() == brute, "ECA ", n);
        if (found) {
            CHECK(is_identity(compose(*found, f)));
        }
    }
}

TEST_CASE("orbit") {
    const CyclicConfig c{1, 0, 0, 1};
    const OrbitRecord id = orbit(identity_rule(two), c, 5);
    CHECK(id.configs.size() == 6);
    for (const auto& x : id.configs) {
        CHECK(x == c);
    }
    const OrbitRecord neg = orbit(negation_rule(), CyclicConfig{0}, 2);
    REQUIRE(neg.configs.size() == 3);
    CHECK(neg.configs[0] == CyclicConfig{0});
    CHECK(neg.configs[1] == CyclicConfig{1});
    CHECK(neg.configs[2] == CyclicConfig{0});
    CHECK(neg.period == std::optional<std::size_t>(2));
    CHECK(neg.transient == std::optional<std::size_t>(0));
}

TEST_CASE("orbits of reversible rules can be run backwards") {
    std::mt19937_64 rng(10);
    const HedlundPair hp = hedlund_pair();
    const LocalRule1D inv = *find_inverse(hp.composite, 4);
    for (int trial = 0; trial < 20; ++trial) {
        const CyclicConfig c0 = oracle::random_config(rng, 2, 5 + rng() % 30);
        const OrbitRecord rec = orbit(hp.composite, c0, 40);
        CyclicConfig c = rec.configs.back();
        for (int t = 0; t < 40; ++t) {
            c = apply(inv, c);
        }
        CHECK(c == c0);
    }
}

TEST_CASE("Hedlund composite carries a translating signal") {
    // Alternating background with one defect: a 11 pair moves right by one
    // cell per step while the background alternates, until it meets the
    // 00 pair travelling the other way around the ring.
    const std::size_t n = 40;
    std::vector<State> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
        cells[i] = static_cast<State>(i % 2);
    }
    cells[0] = 0;
    cells[1] = 0;
    const OrbitRecord rec = orbit(hedlund_pair().composite, CyclicConfig(cells), 12);
    auto find_pair = [](const CyclicConfig& c, State v) {
        std::vector<std::size_t> at;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == v && c.wrapped(static_cast<std::int64_t>(i) + 1) == v) {
                at.push_back(i);
            }
        }
        return at;
    };
    std::optional<std::size_t> prev;
    for (std::size_t t = 3; t <= 12; ++t) {
        const auto ones = find_pair(rec.configs[t], 1);
        REQUIRE(ones.size() == 1);
        if (prev) {
            CHECK(ones[0] == (*prev + 1) % n);
        }
        prev = ones[0];
    }
}

TEST_CASE("order_on_cycle examples") {
    CHECK(order_on_cycle(identity_rule(two), 4, 10).order == 1);
    CHECK(order_on_cycle(negation_rule(), 3, 10).order == 2);
    const LocalRule1D f = hedlund_pair().composite;
    const CycleOrder one = order_on_cycle(f, 1, 10);
    CHECK(one.status == OrderStatus::Found);
    CHECK(one.order == 2);
    CHECK(order_on_cycle(shift(1), 5, 4).status == OrderStatus::ExceedsBound);
    CHECK_THROWS_AS(order_on_cycle(eca(110), 4, 10), NotBijective);
    CHECK_THROWS_AS(order_on_cycle(identity_rule(two), 30, 10), BudgetExceeded);
}

TEST_CASE("order_on_cycle agrees with lockstep iteration") {
    const LocalRule1D f = hedlund_pair().composite;
    for (std::size_t n = 1; n <= 8; ++n) {
        const CycleOrder o = order_on_cycle(f, n, 200);
        REQUIRE(o.status == OrderStatus::Found);
        CHECK(o.order == oracle::order_by_iteration(f, n, 200));
    }
    for (int k : {1, 2}) {
        for (std::size_t n = 1; n <= 8; ++n) {
            CHECK(order_on_cycle(shift(k), n, 100).order == oracle::order_by_iteration(shift(k), n, 100));
        }
    }
}

TEST_CASE("rule JSON round trip and validation") {
    const LocalRule1D f = hedlund_pair().beta;
    const Json j = rule_to_json(f);
    CHECK(j["alphabet"] == 2);
    CHECK(j["offsets"] == Json::array({-1, 0, 1, 2}));
    CHECK(rule_from_json(j) == f);
    CHECK(rule_from_json(Json::parse(dump_json(j))) == f);
    Json bad = j;
    bad["table"].erase(0);
    CHECK_THROWS_AS(rule_from_json(bad), InvalidInput);
    bad = j;
    bad["table"][0] = 2;
    CHECK_THROWS_AS(rule_from_json(bad), InvalidInput);
    bad = j;
    bad["offsets"] = Json::array({1, 0, 2, 3});
    CHECK_THROWS_AS(rule_from_json(bad), InvalidInput);
    CHECK_THROWS_AS(rule_from_json(Json::parse("[1,2]")), InvalidInput);
    CHECK(config_from_json(config_to_json(CyclicConfig{2, 0, 1})) == CyclicConfig{2, 0, 1});
}
