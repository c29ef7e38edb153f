#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tsca/involution.hpp"
#include "tsca/rule.hpp"
#include "tsca/rule_io.hpp"

namespace tsca {

struct CheckRecord {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerificationLog {
    std::vector<CheckRecord> checks;
    // Largest table materialized by each check.
    std::vector<std::pair<std::string, std::uint64_t>> table_sizes;
};

/// Witness that a rule F is time-symmetric: an involution H (the reversal)
/// such that G = F∘H (the companion) is again an involution. Then F = G∘H and
/// F⁻¹ = H∘F∘H = H∘G.
///
/// Only obtainable through verify_certificate(), so every instance has passed
/// all checks. The companion is stored minimized.
class SymmetryCertificate {
public:
    const LocalRule1D& rule() const { return rule_; }
    const LocalRule1D& reversal() const { return reversal_; }
    const LocalRule1D& companion() const { return companion_; }
    // H∘G, the verified two-sided inverse of rule().
    const LocalRule1D& inverse() const { return inverse_; }
    const VerificationLog& log() const { return log_; }

private:
    friend struct CertificateBuilder;
    SymmetryCertificate(LocalRule1D f, LocalRule1D h, LocalRule1D g, LocalRule1D inv, VerificationLog log)
        : rule_(std::move(f)), reversal_(std::move(h)), companion_(std::move(g)), inverse_(std::move(inv)),
          log_(std::move(log)) {}

    LocalRule1D rule_;
    LocalRule1D reversal_;
    LocalRule1D companion_;
    LocalRule1D inverse_;
    VerificationLog log_;
};

struct InvalidCertificate {
    // Which invariant failed.
    std::string failed;
    VerificationLog log;
};

using CertificateResult = std::variant<SymmetryCertificate, InvalidCertificate>;

// Throws AlphabetMismatch unless F and H are endomorphisms of one alphabet.
CertificateResult verify_certificate(const LocalRule1D& f, const LocalRule1D& h);

// Unwraps a result that must be valid; throws VerificationFailure otherwise.
SymmetryCertificate expect_certificate(CertificateResult result, const std::string& context);

struct SearchExhausted {
    int max_span = 0;
    std::uint64_t nodes = 0;
    std::uint64_t candidates = 0;
    // False if the node budget ran out before the bound was covered.
    bool bound_covered = true;
};

using SymmetrySearchResult = std::variant<SymmetryCertificate, SearchExhausted>;

// Looks for an involution H whose neighborhood spans at most max_span with
// (F∘H)² = id. Smaller spans are tried first. Exhaustion is not a proof that
// F is not time-symmetric.
SymmetrySearchResult find_symmetry(const LocalRule1D& f, int max_span, std::uint64_t budget = 50'000'000,
                                   unsigned threads = 1);

// Certificate for F⁻¹ = H∘G, with G as its reversal.
SymmetryCertificate inverse_certificate(const SymmetryCertificate& cert);

// Certificate for F^i (any integer i) with the same reversal.
SymmetryCertificate power_certificate(const SymmetryCertificate& cert, std::int64_t i);

struct Radius0Decomposition {
    LocalRule1D companion;
    LocalRule1D reversal;
    SymmetryCertificate certificate;
};

// Splits a permutation of the alphabet into two radius-0 involutions with
// compose(companion, reversal) == perm. Each cycle is walked from its smallest
// element and relabelled 0..n-1; companion is i ↦ n-1-i on it.
Radius0Decomposition radius0_symmetry(const std::vector<State>& perm);

// Block recoding phi with verified inverse.
class Conjugacy {
public:
    // Throws InvalidInput unless the two rules are mutually inverse.
    Conjugacy(LocalRule1D phi, LocalRule1D phi_inv);

    static Conjugacy identity(Alphabet m);
    // Cellwise relabelling by a permutation of the alphabet.
    static Conjugacy relabel(const std::vector<State>& perm);

    const LocalRule1D& forward() const { return phi_; }
    const LocalRule1D& backward() const { return phi_inv_; }

private:
    LocalRule1D phi_;
    LocalRule1D phi_inv_;
};

// Given a certificate for T on the target alphabet, certifies
// F = phi⁻¹∘T∘phi with reversal phi⁻¹∘H∘phi.
SymmetryCertificate conjugate_certificate(const Conjugacy& conj, const SymmetryCertificate& cert);

struct ProductCA {
    // Pair (x, y) is encoded as x·m + y.
    LocalRule1D rule;
    SymmetryCertificate certificate;
    LocalRule1D project_first;
    LocalRule1D project_second;
};

// F on the first track and F⁻¹ on the second; the cellwise swap reverses time.
ProductCA product_ca(const LocalRule1D& f, const LocalRule1D& f_inv);

struct PartitionedCA {
    // Cell state (left, right) is encoded as left·m + right.
    LocalRule1D exchange;
    LocalRule1D block;
    LocalRule1D rule;
    SymmetryCertificate certificate;
};

// `block` maps pair codes to pair codes and must be an involution. The
// exchange swaps each cell's right sub-cell with the left sub-cell of its
// right neighbor; rule = block∘exchange.
PartitionedCA partitioned_ca(std::uint32_t m, const std::vector<State>& block);

struct PeriodicEmbedding {
    std::size_t period = 1;
    // S → S^p: x ↦ (x_i, F(x)_i, ..., F^{p-1}(x)_i), first component most significant.
    LocalRule1D embedding;
    // Radius-0 rotation (a_0, ..., a_{p-1}) ↦ (a_1, ..., a_{p-1}, a_0).
    LocalRule1D rotation;
};

PeriodicEmbedding periodic_embedding(const LocalRule1D& f, std::size_t p);

struct EmbeddingEscape {
    CyclicConfig source;
    CyclicConfig image;
    // involution(image), which has no preimage under the embedding.
    CyclicConfig moved;
};

// Searches cyclic configurations of length <= max_n for a point of the
// embedding's image that `involution` moves outside the image.
std::optional<EmbeddingEscape> find_embedding_escape(const PeriodicEmbedding& emb, const LocalRule1D& involution,
                                                     std::size_t max_n);

struct AlternatingTrace {
    // c_0 ... c_T
    std::vector<CyclicConfig> unprimed;
    // c'_0 ... c'_T with c'_t = H(c_t)
    std::vector<CyclicConfig> primed;
};

// c'_t = H(c_t), c_{t+1} = G(c'_t). Checks c_{t+1} = F(c_t) and
// c'_{t+1} = F⁻¹(c'_t) before returning.
AlternatingTrace alternating_orbit(const SymmetryCertificate& cert, const CyclicConfig& c0, std::size_t steps);

Json certificate_to_json(const SymmetryCertificate& cert);
// Reads {F, H} and re-verifies; G in the file must match the recomputed companion.
CertificateResult certificate_from_json(const Json& j);

} // namespace tsca
