#include "tsca/rule.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace tsca {

std::uint64_t checked_pow(std::uint64_t m, std::size_t k, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (m != 0 && r > limit / m) {
            throw BudgetExceeded("table of " + std::to_string(m) + "^" + std::to_string(k) +
                                 " entries exceeds limit " + std::to_string(limit));
        }
        r *= m;
    }
    if (r > limit) {
        throw BudgetExceeded("table size " + std::to_string(r) + " exceeds limit " + std::to_string(limit));
    }
    return r;
}

// ---------------------------------------------------------------- Neighborhood

Neighborhood::Neighborhood(std::vector<int> offsets) : offsets_(std::move(offsets)) {
    for (std::size_t i = 1; i < offsets_.size(); ++i) {
        if (offsets_[i - 1] >= offsets_[i]) {
            throw InvalidInput("neighborhood offsets must be strictly increasing");
        }
    }
}

Neighborhood Neighborhood::window(int lo, int hi) {
    std::vector<int> o;
    for (int i = lo; i <= hi; ++i) {
        o.push_back(i);
    }
    return Neighborhood(std::move(o));
}

bool Neighborhood::contains(int offset) const {
    return std::binary_search(offsets_.begin(), offsets_.end(), offset);
}

std::size_t Neighborhood::position(int offset) const {
    auto it = std::lower_bound(offsets_.begin(), offsets_.end(), offset);
    if (it == offsets_.end() || *it != offset) {
        throw std::out_of_range("offset " + std::to_string(offset) + " not in neighborhood");
    }
    return static_cast<std::size_t>(it - offsets_.begin());
}

Neighborhood sumset(const Neighborhood& a, const Neighborhood& b) {
    std::vector<int> o;
    for (int x : a.offsets()) {
        for (int y : b.offsets()) {
            o.push_back(x + y);
        }
    }
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
    return Neighborhood(std::move(o));
}

Neighborhood merge(const Neighborhood& a, const Neighborhood& b) {
    std::vector<int> o;
    std::set_union(a.offsets().begin(), a.offsets().end(), b.offsets().begin(), b.offsets().end(),
                   std::back_inserter(o));
    return Neighborhood(std::move(o));
}

// ----------------------------------------------------------------- LocalRule1D

LocalRule1D::LocalRule1D(Alphabet alphabet, Neighborhood nbhd, std::vector<State> table)
    : LocalRule1D(alphabet, alphabet, std::move(nbhd), std::move(table)) {}

LocalRule1D::LocalRule1D(Alphabet input, Alphabet output, Neighborhood nbhd, std::vector<State> table)
    : input_(input), output_(output), nbhd_(std::move(nbhd)), table_(std::move(table)) {
    const auto expected = checked_pow(input_.size, nbhd_.size());
    if (table_.size() != expected) {
        throw InvalidInput("rule table has " + std::to_string(table_.size()) + " entries, expected " +
                           std::to_string(expected));
    }
    for (State s : table_) {
        if (!output_.contains(s)) {
            throw InvalidInput("rule table entry " + std::to_string(s) + " outside alphabet of size " +
                               std::to_string(output_.size));
        }
    }
}

std::size_t LocalRule1D::index_of(std::span<const State> tuple) const {
    std::size_t idx = 0;
    for (State s : tuple) {
        idx = idx * input_.size + s;
    }
    return idx;
}

// ---------------------------------------------------------------- CyclicConfig

CyclicConfig::CyclicConfig(std::vector<State> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) {
        throw InvalidInput("cyclic configuration must have at least one cell");
    }
}

State CyclicConfig::wrapped(std::int64_t i) const {
    const auto n = static_cast<std::int64_t>(cells_.size());
    return cells_[static_cast<std::size_t>(((i % n) + n) % n)];
}

// ------------------------------------------------------------------ operations

namespace {

void increment(std::vector<State>& digits, std::uint32_t base) {
    for (std::size_t d = digits.size(); d-- > 0;) {
        if (++digits[d] < base) {
            return;
        }
        digits[d] = 0;
    }
}

void require_cells_in(const CyclicConfig& c, Alphabet m) {
    for (State s : c.cells()) {
        if (!m.contains(s)) {
            throw AlphabetMismatch("configuration state " + std::to_string(s) + " outside alphabet of size " +
                                   std::to_string(m.size));
        }
    }
}

} // namespace

LocalRule1D identity_rule(Alphabet m) {
    std::vector<State> table(m.size);
    std::iota(table.begin(), table.end(), State{0});
    return LocalRule1D(m, Neighborhood{0}, std::move(table));
}

LocalRule1D constant_rule(Alphabet m, State value) {
    return LocalRule1D(m, Neighborhood{}, std::vector<State>{value});
}

CyclicConfig apply(const LocalRule1D& rule, const CyclicConfig& c) {
    require_cells_in(c, rule.input_alphabet());
    const auto& offs = rule.neighborhood().offsets();
    std::vector<State> tuple(offs.size());
    std::vector<State> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t k = 0; k < offs.size(); ++k) {
            tuple[k] = c.wrapped(static_cast<std::int64_t>(i) + offs[k]);
        }
        out[i] = rule(tuple);
    }
    return CyclicConfig(std::move(out));
}

LocalRule1D compose(const LocalRule1D& g, const LocalRule1D& h) {
    if (g.input_alphabet() != h.output_alphabet()) {
        throw AlphabetMismatch("compose: outer rule reads alphabet " + std::to_string(g.input_alphabet().size) +
                               " but inner rule writes " + std::to_string(h.output_alphabet().size));
    }
    const Neighborhood nbhd = sumset(g.neighborhood(), h.neighborhood());
    const auto& go = g.neighborhood().offsets();
    const auto& ho = h.neighborhood().offsets();
    const std::uint32_t m = h.input_alphabet().size;
    const auto size = checked_pow(m, nbhd.size());

    std::vector<std::vector<std::size_t>> pos(go.size(), std::vector<std::size_t>(ho.size()));
    for (std::size_t a = 0; a < go.size(); ++a) {
        for (std::size_t b = 0; b < ho.size(); ++b) {
            pos[a][b] = nbhd.position(go[a] + ho[b]);
        }
    }

    std::vector<State> table(size);
    std::vector<State> digits(nbhd.size(), 0);
    std::vector<State> inner(go.size());
    std::vector<State> hbuf(ho.size());
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        for (std::size_t a = 0; a < go.size(); ++a) {
            for (std::size_t b = 0; b < ho.size(); ++b) {
                hbuf[b] = digits[pos[a][b]];
            }
            inner[a] = h(hbuf);
        }
        table[idx] = g(inner);
        increment(digits, m);
    }
    return LocalRule1D(h.input_alphabet(), g.output_alphabet(), nbhd, std::move(table));
}

LocalRule1D minimize_neighborhood(const LocalRule1D& rule) {
    const auto& offs = rule.neighborhood().offsets();
    const std::size_t k = offs.size();
    const std::uint32_t m = rule.input_alphabet().size;
    const auto& table = rule.table();

    // weight[d] = m^(k-1-d)
    std::vector<std::uint64_t> weight(k, 1);
    for (std::size_t d = k; d-- > 1;) {
        weight[d - 1] = weight[d] * m;
    }

    std::vector<bool> essential(k, false);
    for (std::size_t d = 0; d < k; ++d) {
        for (std::uint64_t idx = 0; idx < table.size() && !essential[d]; ++idx) {
            if ((idx / weight[d]) % m != 0) {
                continue;
            }
            for (std::uint32_t v = 1; v < m; ++v) {
                if (table[idx] != table[idx + v * weight[d]]) {
                    essential[d] = true;
                    break;
                }
            }
        }
    }

    std::vector<int> kept;
    std::vector<std::uint64_t> kept_weight;
    for (std::size_t d = 0; d < k; ++d) {
        if (essential[d]) {
            kept.push_back(offs[d]);
            kept_weight.push_back(weight[d]);
        }
    }
    if (kept.size() == k) {
        return rule;
    }

    const auto size = checked_pow(m, kept.size());
    std::vector<State> out(size);
    std::vector<State> digits(kept.size(), 0);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        std::uint64_t src = 0;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            src += digits[j] * kept_weight[j];
        }
        out[idx] = table[src];
        increment(digits, m);
    }
    return LocalRule1D(rule.input_alphabet(), rule.output_alphabet(), Neighborhood(std::move(kept)),
                       std::move(out));
}

LocalRule1D extend_to(const LocalRule1D& rule, const Neighborhood& target) {
    const auto& offs = rule.neighborhood().offsets();
    std::vector<std::size_t> pos(offs.size());
    for (std::size_t k = 0; k < offs.size(); ++k) {
        pos[k] = target.position(offs[k]);
    }
    const std::uint32_t m = rule.input_alphabet().size;
    const auto size = checked_pow(m, target.size());
    std::vector<State> table(size);
    std::vector<State> digits(target.size(), 0);
    std::vector<State> sub(offs.size());
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        for (std::size_t k = 0; k < offs.size(); ++k) {
            sub[k] = digits[pos[k]];
        }
        table[idx] = rule(sub);
        increment(digits, m);
    }
    return LocalRule1D(rule.input_alphabet(), rule.output_alphabet(), target, std::move(table));
}

bool equal(const LocalRule1D& f, const LocalRule1D& g) {
    if (f.input_alphabet() != g.input_alphabet() || f.output_alphabet() != g.output_alphabet()) {
        throw AlphabetMismatch("equal: rules act on different alphabets");
    }
    if (f.neighborhood() == g.neighborhood()) {
        return f.table() == g.table();
    }
    const Neighborhood u = merge(f.neighborhood(), g.neighborhood());
    const auto& fo = f.neighborhood().offsets();
    const auto& go = g.neighborhood().offsets();
    std::vector<std::size_t> fpos(fo.size()), gpos(go.size());
    for (std::size_t k = 0; k < fo.size(); ++k) {
        fpos[k] = u.position(fo[k]);
    }
    for (std::size_t k = 0; k < go.size(); ++k) {
        gpos[k] = u.position(go[k]);
    }
    const std::uint32_t m = f.input_alphabet().size;
    const auto size = checked_pow(m, u.size());
    std::vector<State> digits(u.size(), 0);
    std::vector<State> fs(fo.size()), gs(go.size());
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        for (std::size_t k = 0; k < fo.size(); ++k) {
            fs[k] = digits[fpos[k]];
        }
        for (std::size_t k = 0; k < go.size(); ++k) {
            gs[k] = digits[gpos[k]];
        }
        if (f(fs) != g(gs)) {
            return false;
        }
        increment(digits, m);
    }
    return true;
}

bool is_identity(const LocalRule1D& f) {
    return f.is_endomorphism() && equal(f, identity_rule(f.input_alphabet()));
}

LocalRule1D power(const LocalRule1D& rule, std::uint64_t k) {
    if (!rule.is_endomorphism()) {
        throw AlphabetMismatch("power: rule is not an endomorphism");
    }
    LocalRule1D result = identity_rule(rule.input_alphabet());
    const LocalRule1D base = minimize_neighborhood(rule);
    for (std::uint64_t i = 0; i < k; ++i) {
        result = minimize_neighborhood(compose(base, result));
    }
    return result;
}

std::optional<LocalRule1D> find_inverse(const LocalRule1D& f_in, int max_span) {
    if (max_span < 0) {
        throw InvalidInput("find_inverse: max_span must be non-negative");
    }
    LocalRule1D f = minimize_neighborhood(f_in);
    if (f.neighborhood().empty()) {
        f = extend_to(f, Neighborhood{0});
    }
    const Alphabet in = f.input_alphabet();
    const Alphabet out = f.output_alphabet();
    const auto& fo = f.neighborhood().offsets();
    const int lf = f.neighborhood().min();
    const int rf = f.neighborhood().max();
    const int sf = rf - lf;
    constexpr State kUnset = ~State{0};

    const LocalRule1D id_in = identity_rule(in);
    const LocalRule1D id_out = identity_rule(out);

    std::vector<State> ftuple(fo.size());
    for (int s = 0; s <= max_span; ++s) {
        const std::size_t len = static_cast<std::size_t>(s + sf + 1);
        const auto words = checked_pow(in.size, len);
        const auto gsize = checked_pow(out.size, static_cast<std::size_t>(s + 1));
        std::vector<State> image(static_cast<std::size_t>(s + 1));

        // g reads offsets a..a+s; the pinned word covers positions a+lf .. a+s+rf.
        for (int a = -s - rf; a <= -lf; ++a) {
            const std::size_t centre = static_cast<std::size_t>(-(a + lf));
            std::vector<State> gtable(gsize, kUnset);
            std::vector<State> word(len, 0);
            bool consistent = true;
            for (std::uint64_t w = 0; w < words && consistent; ++w) {
                for (std::size_t j = 0; j <= static_cast<std::size_t>(s); ++j) {
                    for (std::size_t k = 0; k < fo.size(); ++k) {
                        ftuple[k] = word[j + static_cast<std::size_t>(fo[k] - lf)];
                    }
                    image[j] = f(ftuple);
                }
                std::size_t gi = 0;
                for (State v : image) {
                    gi = gi * out.size + v;
                }
                if (gtable[gi] == kUnset) {
                    gtable[gi] = word[centre];
                } else if (gtable[gi] != word[centre]) {
                    consistent = false;
                }
                increment(word, in.size);
            }
            if (!consistent) {
                continue;
            }
            for (State& v : gtable) {
                if (v == kUnset) {
                    v = 0;
                }
            }
            LocalRule1D g(out, in, Neighborhood::window(a, a + s), std::move(gtable));
            if (equal(compose(g, f), id_in) && equal(compose(f, g), id_out)) {
                return minimize_neighborhood(g);
            }
        }
    }
    return std::nullopt;
}

OrbitRecord orbit(const LocalRule1D& rule, const CyclicConfig& c0, std::size_t steps) {
    OrbitRecord rec;
    rec.configs.reserve(steps + 1);
    rec.configs.push_back(c0);
    require_cells_in(c0, rule.input_alphabet());
    std::map<CyclicConfig, std::size_t> seen;
    seen.emplace(c0, 0);
    for (std::size_t t = 1; t <= steps; ++t) {
        rec.configs.push_back(apply(rule, rec.configs.back()));
        if (!rec.period && rule.is_endomorphism()) {
            auto [it, inserted] = seen.emplace(rec.configs.back(), t);
            if (!inserted) {
                rec.transient = it->second;
                rec.period = t - it->second;
            }
        }
    }
    return rec;
}

CycleOrder order_on_cycle(const LocalRule1D& rule, std::size_t n, std::uint64_t bound) {
    if (!rule.is_endomorphism()) {
        throw AlphabetMismatch("order_on_cycle: rule is not an endomorphism");
    }
    if (n == 0) {
        throw InvalidInput("order_on_cycle: n must be positive");
    }
    const std::uint32_t m = rule.input_alphabet().size;
    const auto count = checked_pow(m, n);

    std::vector<std::uint32_t> perm(count);
    std::vector<State> cells(n, 0);
    for (std::uint64_t code = 0; code < count; ++code) {
        const CyclicConfig next = apply(rule, CyclicConfig(cells));
        std::uint64_t img = 0;
        for (State s : next.cells()) {
            img = img * m + s;
        }
        perm[code] = static_cast<std::uint32_t>(img);
        increment(cells, m);
    }

    std::vector<bool> hit(count, false);
    for (auto p : perm) {
        if (hit[p]) {
            throw NotBijective("rule is not bijective on cyclic configurations of length " + std::to_string(n));
        }
        hit[p] = true;
    }

    std::vector<bool> done(count, false);
    std::uint64_t order = 1;
    for (std::uint64_t start = 0; start < count; ++start) {
        if (done[start]) {
            continue;
        }
        std::uint64_t len = 0;
        for (std::uint64_t x = start; !done[x]; x = perm[x]) {
            done[x] = true;
            ++len;
        }
        const std::uint64_t step = len / std::gcd(order, len);
        if (order > bound / step) {
            return {OrderStatus::ExceedsBound, 0};
        }
        order *= step;
    }
    if (order > bound) {
        return {OrderStatus::ExceedsBound, 0};
    }
    return {OrderStatus::Found, order};
}

std::string describe(const LocalRule1D& rule) {
    std::ostringstream os;
    os << "m=" << rule.input_alphabet().size;
    if (!rule.is_endomorphism()) {
        os << "->" << rule.output_alphabet().size;
    }
    os << " N={";
    const auto& offs = rule.neighborhood().offsets();
    for (std::size_t i = 0; i < offs.size(); ++i) {
        os << (i ? "," : "") << offs[i];
    }
    os << "} table=[";
    const auto& t = rule.table();
    const std::size_t shown = std::min<std::size_t>(t.size(), 64);
    for (std::size_t i = 0; i < shown; ++i) {
        os << (i ? "," : "") << t[i];
    }
    if (shown < t.size()) {
        os << ",...(" << t.size() << " entries)";
    }
    os << "]";
    return os.str();
}

} // namespace tsca
