#include "tsca/symmetry.hpp"

#include <algorithm>
#include <atomic>
#include <set>

namespace tsca {

struct CertificateBuilder {
    static SymmetryCertificate make(LocalRule1D f, LocalRule1D h, LocalRule1D g, LocalRule1D inv,
                                    VerificationLog log) {
        return SymmetryCertificate(std::move(f), std::move(h), std::move(g), std::move(inv), std::move(log));
    }
};

namespace {

std::uint64_t table_entries(const LocalRule1D& r) {
    return r.table().size();
}

// find_inverse cross-check is skipped beyond this many words per window.
constexpr std::uint64_t kInverseCrossCheckWords = std::uint64_t{1} << 18;

} // namespace

CertificateResult verify_certificate(const LocalRule1D& f_in, const LocalRule1D& h_in) {
    if (!f_in.is_endomorphism() || !h_in.is_endomorphism() || f_in.alphabet() != h_in.alphabet()) {
        throw AlphabetMismatch("certificate rules must be endomorphisms of a single alphabet");
    }
    const LocalRule1D f = minimize_neighborhood(f_in);
    const LocalRule1D h = minimize_neighborhood(h_in);
    const LocalRule1D id = identity_rule(f.alphabet());
    VerificationLog log;
    auto record = [&](std::string name, bool ok, std::string detail = {}) {
        log.checks.push_back({std::move(name), ok, std::move(detail)});
        return ok;
    };

    const LocalRule1D hh = compose(h, h);
    log.table_sizes.emplace_back("H∘H", table_entries(hh));
    if (!record("reversal is an involution", is_identity(hh))) {
        return InvalidCertificate{"H is not an involution", std::move(log)};
    }

    const LocalRule1D fh = compose(f, h);
    log.table_sizes.emplace_back("F∘H", table_entries(fh));
    const LocalRule1D g = minimize_neighborhood(fh);
    const LocalRule1D gg = compose(g, g);
    log.table_sizes.emplace_back("G∘G", table_entries(gg));
    if (!record("companion F∘H is an involution", is_identity(gg))) {
        return InvalidCertificate{"F∘H is not an involution", std::move(log)};
    }

    const LocalRule1D gh = compose(g, h);
    log.table_sizes.emplace_back("G∘H", table_entries(gh));
    if (!record("G∘H equals F", equal(gh, f))) {
        return InvalidCertificate{"G∘H differs from F", std::move(log)};
    }

    // F⁻¹ = H∘F∘H, checked as a two-sided inverse.
    const LocalRule1D hfh = minimize_neighborhood(compose(h, fh));
    const LocalRule1D left = compose(hfh, f);
    const LocalRule1D right = compose(f, hfh);
    log.table_sizes.emplace_back("(H∘F∘H)∘F", table_entries(left));
    log.table_sizes.emplace_back("F∘(H∘F∘H)", table_entries(right));
    if (!record("H∘F∘H is a two-sided inverse of F", equal(left, id) && equal(right, id))) {
        return InvalidCertificate{"H∘F∘H is not the inverse of F", std::move(log)};
    }

    const int bound = g.neighborhood().span() + h.neighborhood().span();
    const auto span_f = static_cast<std::size_t>(f.neighborhood().span());
    bool cheap = true;
    try {
        checked_pow(f.alphabet().size, static_cast<std::size_t>(bound) + span_f + 1, kInverseCrossCheckWords);
    } catch (const BudgetExceeded&) {
        cheap = false;
    }
    if (cheap) {
        const auto inv = find_inverse(f, bound);
        const bool ok = inv.has_value() && equal(*inv, hfh);
        if (!record("find_inverse agrees with H∘F∘H", ok, "span bound " + std::to_string(bound))) {
            return InvalidCertificate{"find_inverse disagrees with H∘F∘H", std::move(log)};
        }
    } else {
        record("find_inverse agrees with H∘F∘H", true, "skipped: word space too large, two-sided check stands");
    }

    return CertificateBuilder::make(f, h, g, hfh, std::move(log));
}

SymmetryCertificate expect_certificate(CertificateResult result, const std::string& context) {
    if (auto* bad = std::get_if<InvalidCertificate>(&result)) {
        throw VerificationFailure(context + ": " + bad->failed);
    }
    return std::get<SymmetryCertificate>(std::move(result));
}

// ------------------------------------------------------------- find_symmetry

SymmetrySearchResult find_symmetry(const LocalRule1D& f_in, int max_span, std::uint64_t budget, unsigned threads) {
    if (max_span < 0) {
        throw InvalidInput("find_symmetry: max_span must be non-negative");
    }
    if (!f_in.is_endomorphism()) {
        throw AlphabetMismatch("find_symmetry: rule is not an endomorphism");
    }
    const LocalRule1D f = minimize_neighborhood(f_in);
    SearchExhausted summary;
    summary.max_span = max_span;
    std::uint64_t remaining = budget;
    std::atomic<std::uint64_t> candidates{0};
    auto finish = [&](bool covered) {
        summary.bound_covered = covered;
        summary.candidates = candidates.load();
        return summary;
    };

    // An involution's neighborhood satisfies min <= 0 <= max (0 ∈ N+N), so
    // windows of span s containing 0 cover every involution of span s.
    for (int s = 0; s <= max_span; ++s) {
        for (int a = -s; a <= 0; ++a) {
            if (remaining == 0) {
                return finish(false);
            }
            EnumerationSpec spec;
            spec.alphabet = f.alphabet();
            spec.neighborhood = Neighborhood::window(a, a + s);
            spec.budget = remaining;
            spec.threads = threads;
            spec.stop_after = 1;
            spec.partition_depth = 2;
            spec.accept = [&](const LocalRule1D& h) {
                const LocalRule1D hm = minimize_neighborhood(h);
                // Smaller spans were covered by earlier windows.
                if (s > 0 && (hm.neighborhood().empty() || hm.neighborhood().span() < s)) {
                    return false;
                }
                candidates.fetch_add(1, std::memory_order_relaxed);
                return is_involution(minimize_neighborhood(compose(f, hm)));
            };
            const SearchReport report = enumerate_involutions(spec);
            summary.nodes += report.nodes;
            remaining -= std::min(remaining, report.nodes);
            if (!report.found.empty()) {
                return expect_certificate(verify_certificate(f, report.found.front()), "find_symmetry");
            }
            if (!report.exhausted && !report.stopped_early) {
                return finish(false);
            }
        }
    }
    return finish(true);
}

// ---------------------------------------------------- remarks on certificates

SymmetryCertificate inverse_certificate(const SymmetryCertificate& cert) {
    return expect_certificate(verify_certificate(cert.inverse(), cert.companion()), "inverse_certificate");
}

SymmetryCertificate power_certificate(const SymmetryCertificate& cert, std::int64_t i) {
    const LocalRule1D base = i >= 0 ? cert.rule() : cert.inverse();
    const auto k = static_cast<std::uint64_t>(i >= 0 ? i : -i);
    const LocalRule1D fi = power(base, k);
    return expect_certificate(verify_certificate(fi, cert.reversal()), "power_certificate");
}

// ------------------------------------------------------------------ radius 0

Radius0Decomposition radius0_symmetry(const std::vector<State>& perm) {
    const auto n = perm.size();
    if (n == 0) {
        throw InvalidInput("radius0_symmetry: empty permutation");
    }
    std::vector<bool> hit(n, false);
    for (State s : perm) {
        if (s >= n || hit[s]) {
            throw InvalidInput("radius0_symmetry: input is not a permutation");
        }
        hit[s] = true;
    }

    std::vector<State> h_of(n), g_of(n);
    std::vector<bool> done(n, false);
    for (State start = 0; start < n; ++start) {
        if (done[start]) {
            continue;
        }
        std::vector<State> cycle;
        for (State x = start; !done[x]; x = perm[x]) {
            done[x] = true;
            cycle.push_back(x);
        }
        const auto len = cycle.size();
        for (std::size_t i = 0; i < len; ++i) {
            h_of[cycle[i]] = cycle[len - 1 - i];
        }
    }
    // g = h∘f, so f = h∘g.
    for (State x = 0; x < n; ++x) {
        g_of[x] = h_of[perm[x]];
    }

    const Alphabet m(static_cast<std::uint32_t>(n));
    LocalRule1D companion(m, Neighborhood{0}, h_of);
    LocalRule1D reversal(m, Neighborhood{0}, g_of);
    const LocalRule1D f(m, Neighborhood{0}, perm);
    if (!equal(compose(companion, reversal), f)) {
        throw VerificationFailure("radius0_symmetry: factors do not compose to the permutation");
    }
    auto cert = expect_certificate(verify_certificate(f, reversal), "radius0_symmetry");
    return {std::move(companion), std::move(reversal), std::move(cert)};
}

// ----------------------------------------------------------------- conjugacy

Conjugacy::Conjugacy(LocalRule1D phi, LocalRule1D phi_inv) : phi_(std::move(phi)), phi_inv_(std::move(phi_inv)) {
    if (phi_.input_alphabet() != phi_inv_.output_alphabet() || phi_.output_alphabet() != phi_inv_.input_alphabet()) {
        throw InvalidInput("conjugacy: alphabets of phi and phi_inv do not match up");
    }
    if (!is_identity(compose(phi_inv_, phi_)) || !is_identity(compose(phi_, phi_inv_))) {
        throw InvalidInput("conjugacy: phi and phi_inv are not mutually inverse");
    }
}

Conjugacy Conjugacy::identity(Alphabet m) {
    return Conjugacy(identity_rule(m), identity_rule(m));
}

Conjugacy Conjugacy::relabel(const std::vector<State>& perm) {
    std::vector<State> inv(perm.size(), 0);
    std::vector<bool> hit(perm.size(), false);
    for (State i = 0; i < perm.size(); ++i) {
        if (perm[i] >= perm.size() || hit[perm[i]]) {
            throw InvalidInput("relabel: input is not a permutation");
        }
        hit[perm[i]] = true;
        inv[perm[i]] = i;
    }
    const Alphabet m(static_cast<std::uint32_t>(perm.size()));
    return Conjugacy(LocalRule1D(m, Neighborhood{0}, perm), LocalRule1D(m, Neighborhood{0}, inv));
}

SymmetryCertificate conjugate_certificate(const Conjugacy& conj, const SymmetryCertificate& cert) {
    if (conj.forward().output_alphabet() != cert.rule().alphabet()) {
        throw AlphabetMismatch("conjugate_certificate: conjugacy target alphabet differs from the certificate's");
    }
    const auto& phi = conj.forward();
    const auto& phi_inv = conj.backward();
    const LocalRule1D f = minimize_neighborhood(compose(phi_inv, compose(cert.rule(), phi)));
    const LocalRule1D h = minimize_neighborhood(compose(phi_inv, compose(cert.reversal(), phi)));
    return expect_certificate(verify_certificate(f, h), "conjugate_certificate");
}

// ------------------------------------------------------------------- product

ProductCA product_ca(const LocalRule1D& f_in, const LocalRule1D& f_inv_in) {
    if (!f_in.is_endomorphism() || f_in.input_alphabet() != f_inv_in.input_alphabet() ||
        f_in.output_alphabet() != f_inv_in.output_alphabet()) {
        throw AlphabetMismatch("product_ca: rule and inverse must be endomorphisms of one alphabet");
    }
    if (!is_identity(compose(f_inv_in, f_in)) || !is_identity(compose(f_in, f_inv_in))) {
        throw InvalidInput("product_ca: supplied inverse is not a two-sided inverse");
    }
    const LocalRule1D f = minimize_neighborhood(f_in);
    const LocalRule1D fi = minimize_neighborhood(f_inv_in);
    const std::uint32_t m = f.alphabet().size;
    const Alphabet pairs(static_cast<std::uint32_t>(checked_pow(m, 2, 0xFFFF)));

    Neighborhood nbhd = merge(f.neighborhood(), fi.neighborhood());
    if (nbhd.empty()) {
        nbhd = Neighborhood{0};
    }
    const LocalRule1D fx = extend_to(f, nbhd);
    const LocalRule1D fy = extend_to(fi, nbhd);
    std::vector<State> xs(nbhd.size()), ys(nbhd.size());
    LocalRule1D rule = LocalRule1D::from_function(pairs, pairs, nbhd, [&](std::span<const State> t) {
        for (std::size_t k = 0; k < t.size(); ++k) {
            xs[k] = t[k] / m;
            ys[k] = t[k] % m;
        }
        return fx(xs) * m + fy(ys);
    });
    const LocalRule1D swap = LocalRule1D::from_function(pairs, pairs, Neighborhood{0}, [&](std::span<const State> t) {
        return (t[0] % m) * m + t[0] / m;
    });
    const Alphabet single(m);
    LocalRule1D first = LocalRule1D::from_function(pairs, single, Neighborhood{0},
                                                   [&](std::span<const State> t) { return t[0] / m; });
    LocalRule1D second = LocalRule1D::from_function(pairs, single, Neighborhood{0},
                                                    [&](std::span<const State> t) { return t[0] % m; });
    auto cert = expect_certificate(verify_certificate(rule, swap), "product_ca");
    return {std::move(rule), std::move(cert), std::move(first), std::move(second)};
}

// --------------------------------------------------------------- partitioned

PartitionedCA partitioned_ca(std::uint32_t m, const std::vector<State>& block) {
    const Alphabet cells(static_cast<std::uint32_t>(checked_pow(m, 2, 0xFFFF)));
    if (block.size() != cells.size) {
        throw InvalidInput("partitioned_ca: block map needs " + std::to_string(cells.size) + " entries");
    }
    for (State s = 0; s < cells.size; ++s) {
        if (block[s] >= cells.size || block[block[s]] != s) {
            throw InvalidInput("partitioned_ca: block map is not an involution");
        }
    }
    LocalRule1D exchange = LocalRule1D::from_function(cells, cells, Neighborhood{-1, 1},
                                                      [&](std::span<const State> t) {
                                                          const State left = t[0] % m;  // right half of cell i-1
                                                          const State right = t[1] / m; // left half of cell i+1
                                                          return left * m + right;
                                                      });
    LocalRule1D block_rule(cells, Neighborhood{0}, block);
    LocalRule1D rule = minimize_neighborhood(compose(block_rule, exchange));
    auto cert = expect_certificate(verify_certificate(rule, exchange), "partitioned_ca");
    if (!equal(cert.companion(), block_rule)) {
        throw VerificationFailure("partitioned_ca: companion differs from the block rule");
    }
    return {std::move(exchange), std::move(block_rule), std::move(rule), std::move(cert)};
}

// ---------------------------------------------------------- periodic embedding

PeriodicEmbedding periodic_embedding(const LocalRule1D& f_in, std::size_t p) {
    if (p == 0) {
        throw InvalidInput("periodic_embedding: period must be positive");
    }
    if (!f_in.is_endomorphism()) {
        throw AlphabetMismatch("periodic_embedding: rule is not an endomorphism");
    }
    const LocalRule1D f = minimize_neighborhood(f_in);
    if (!is_identity(power(f, p))) {
        throw InvalidInput("periodic_embedding: F^" + std::to_string(p) + " is not the identity");
    }
    const std::uint32_t m = f.alphabet().size;
    const Alphabet tuples(static_cast<std::uint32_t>(checked_pow(m, p, 0xFFFF)));

    std::vector<LocalRule1D> powers;
    Neighborhood nbhd{0};
    for (std::size_t k = 0; k < p; ++k) {
        powers.push_back(power(f, k));
        nbhd = merge(nbhd, powers.back().neighborhood());
    }
    for (auto& r : powers) {
        r = extend_to(r, nbhd);
    }
    LocalRule1D embedding = LocalRule1D::from_function(f.alphabet(), tuples, nbhd, [&](std::span<const State> t) {
        State code = 0;
        for (const auto& r : powers) {
            code = code * m + r(t);
        }
        return code;
    });
    const State top = static_cast<State>(tuples.size / m);
    LocalRule1D rotation = LocalRule1D::from_function(tuples, tuples, Neighborhood{0}, [&](std::span<const State> t) {
        const State a0 = t[0] / top;
        return (t[0] % top) * m + a0;
    });
    if (!equal(compose(embedding, f), compose(rotation, embedding))) {
        throw VerificationFailure("periodic_embedding: embedding does not intertwine F with the rotation");
    }
    return {p, std::move(embedding), std::move(rotation)};
}

std::optional<EmbeddingEscape> find_embedding_escape(const PeriodicEmbedding& emb, const LocalRule1D& involution,
                                                     std::size_t max_n) {
    const Alphabet src = emb.embedding.input_alphabet();
    const Alphabet tgt = emb.embedding.output_alphabet();
    if (involution.input_alphabet() != tgt || !involution.is_endomorphism()) {
        throw AlphabetMismatch("find_embedding_escape: involution must act on the embedding's target alphabet");
    }
    const State top = static_cast<State>(tgt.size / src.size);
    for (std::size_t n = 1; n <= max_n; ++n) {
        const auto count = checked_pow(src.size, n);
        std::vector<State> cells(n, 0);
        for (std::uint64_t code = 0; code < count; ++code) {
            const CyclicConfig x(cells);
            const CyclicConfig y = apply(emb.embedding, x);
            const CyclicConfig moved = apply(involution, y);
            std::vector<State> first(n);
            for (std::size_t i = 0; i < n; ++i) {
                first[i] = moved[i] / top;
            }
            // Any preimage of `moved` must be its first track.
            if (apply(emb.embedding, CyclicConfig(first)) != moved) {
                return EmbeddingEscape{x, y, moved};
            }
            for (std::size_t d = n; d-- > 0;) {
                if (++cells[d] < src.size) {
                    break;
                }
                cells[d] = 0;
            }
        }
    }
    return std::nullopt;
}

// --------------------------------------------------------------- alternating

AlternatingTrace alternating_orbit(const SymmetryCertificate& cert, const CyclicConfig& c0, std::size_t steps) {
    AlternatingTrace trace;
    trace.unprimed.push_back(c0);
    trace.primed.push_back(apply(cert.reversal(), c0));
    for (std::size_t t = 0; t < steps; ++t) {
        trace.unprimed.push_back(apply(cert.companion(), trace.primed.back()));
        trace.primed.push_back(apply(cert.reversal(), trace.unprimed.back()));
    }
    for (std::size_t t = 0; t < steps; ++t) {
        if (apply(cert.rule(), trace.unprimed[t]) != trace.unprimed[t + 1]) {
            throw VerificationFailure("alternating_orbit: c_{t+1} != F(c_t) at t=" + std::to_string(t));
        }
        if (apply(cert.inverse(), trace.primed[t]) != trace.primed[t + 1]) {
            throw VerificationFailure("alternating_orbit: c'_{t+1} != F^-1(c'_t) at t=" + std::to_string(t));
        }
    }
    return trace;
}

// ---------------------------------------------------------------------- JSON

Json certificate_to_json(const SymmetryCertificate& cert) {
    Json j;
    j["F"] = rule_to_json(cert.rule());
    j["H"] = rule_to_json(cert.reversal());
    j["G"] = rule_to_json(cert.companion());
    Json checks = Json::array();
    for (const auto& c : cert.log().checks) {
        Json e;
        e["check"] = c.name;
        e["passed"] = c.passed;
        if (!c.detail.empty()) {
            e["detail"] = c.detail;
        }
        checks.push_back(std::move(e));
    }
    Json sizes = Json::object();
    for (const auto& [name, size] : cert.log().table_sizes) {
        sizes[name] = size;
    }
    j["verification"] = {{"checks", checks}, {"table_sizes", sizes}};
    return j;
}

CertificateResult certificate_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("F") || !j.contains("H")) {
        throw InvalidInput("certificate needs \"F\" and \"H\"");
    }
    const LocalRule1D f = rule_from_json(j.at("F"));
    const LocalRule1D h = rule_from_json(j.at("H"));
    auto result = verify_certificate(f, h);
    if (j.contains("G")) {
        if (auto* cert = std::get_if<SymmetryCertificate>(&result)) {
            const LocalRule1D g = rule_from_json(j.at("G"));
            if (g.alphabet() != cert->companion().alphabet() || !equal(g, cert->companion())) {
                return InvalidCertificate{"stored G differs from F∘H", cert->log()};
            }
        }
    }
    return result;
}

} // namespace tsca
