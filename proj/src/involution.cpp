#include "tsca/involution.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace tsca {

AdditiveCoefficients::AdditiveCoefficients(std::uint32_t m, int r, std::vector<State> a)
    : modulus(m), radius(r), coeffs(std::move(a)) {
    if (m < 1 || r < 0) {
        throw InvalidInput("additive rule needs modulus >= 1 and radius >= 0");
    }
    if (coeffs.size() != static_cast<std::size_t>(2 * r + 1)) {
        throw InvalidInput("additive rule of radius " + std::to_string(r) + " needs " + std::to_string(2 * r + 1) +
                           " coefficients");
    }
    for (State c : coeffs) {
        if (c >= m) {
            throw InvalidInput("additive coefficient " + std::to_string(c) + " not reduced mod " + std::to_string(m));
        }
    }
}

bool is_involution(const LocalRule1D& f) {
    if (!f.is_endomorphism()) {
        return false;
    }
    return is_identity(compose(f, f));
}

// ------------------------------------------------------------- enumeration

namespace {

constexpr State kUnset = ~State{0};

// Word constraints for h(h(x))_0 = x_0. A word ranges over N+N ∪ {0}; for each
// outer offset it names the table entry the inner application reads.
struct SquareConstraints {
    std::uint32_t m = 0;
    std::size_t k = 0;
    std::size_t table_size = 0;
    std::size_t words = 0;
    std::vector<std::uint32_t> inner;  // words * k
    std::vector<State> target;         // words
    std::vector<std::vector<std::uint32_t>> watch;
    std::vector<std::uint32_t> order;  // branching order
    std::size_t diagonal_count = 0;    // leading entries of `order` that are constant words

    SquareConstraints(Alphabet alphabet, const Neighborhood& nbhd) {
        m = alphabet.size;
        k = nbhd.size();
        table_size = checked_pow(m, k, std::uint64_t{1} << 16);
        Neighborhood positions = merge(sumset(nbhd, nbhd), Neighborhood{0});
        words = checked_pow(m, positions.size(), std::uint64_t{1} << 22);

        const auto& offs = nbhd.offsets();
        std::vector<std::vector<std::size_t>> pos(k, std::vector<std::size_t>(k));
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                pos[a][b] = positions.position(offs[a] + offs[b]);
            }
        }
        const std::size_t centre = positions.position(0);

        inner.resize(words * k);
        target.resize(words);
        watch.assign(table_size, {});
        std::vector<State> digits(positions.size(), 0);
        for (std::size_t w = 0; w < words; ++w) {
            for (std::size_t a = 0; a < k; ++a) {
                std::uint32_t idx = 0;
                for (std::size_t b = 0; b < k; ++b) {
                    idx = idx * m + digits[pos[a][b]];
                }
                inner[w * k + a] = idx;
                watch[idx].push_back(static_cast<std::uint32_t>(w));
            }
            target[w] = digits[centre];
            for (std::size_t d = digits.size(); d-- > 0;) {
                if (++digits[d] < m) {
                    break;
                }
                digits[d] = 0;
            }
        }

        // Constant words first: a ↦ h(a…a) must itself be an involution of S.
        std::vector<bool> placed(table_size, false);
        for (State a = 0; a < m; ++a) {
            std::uint32_t idx = 0;
            for (std::size_t d = 0; d < k; ++d) {
                idx = idx * m + a;
            }
            if (!placed[idx]) {
                placed[idx] = true;
                order.push_back(idx);
            }
        }
        diagonal_count = order.size();
        for (std::uint32_t idx = 0; idx < table_size; ++idx) {
            if (!placed[idx]) {
                order.push_back(idx);
            }
        }
    }
};

struct PartitionResult {
    std::vector<LocalRule1D> found;
    std::uint64_t nodes = 0;
    std::uint64_t square = 0;
    std::uint64_t diagonal = 0;
    std::uint64_t hook = 0;
    bool out_of_budget = false;
    bool stopped = false;
};

class SquareSolver {
public:
    SquareSolver(const SquareConstraints& c, const EnumerationSpec& spec, std::uint64_t budget,
                 std::mutex& callback_mutex)
        : c_(c), spec_(spec), budget_(budget), callback_mutex_(callback_mutex), table_(c.table_size, kUnset),
          pending_(c.words, static_cast<std::uint32_t>(c.k)) {}

    // Fix the first depth branching variables to the digits of `prefix`.
    // Returns false if this prefix admits no assignment.
    bool seed(std::uint64_t prefix, std::size_t depth) {
        if (c_.k == 0) {
            for (std::uint32_t w = 0; w < c_.words; ++w) {
                queue_.push_back(w);
            }
        }
        if (!propagate()) {
            return false;
        }
        std::vector<State> digits(depth);
        for (std::size_t i = depth; i-- > 0;) {
            digits[i] = static_cast<State>(prefix % c_.m);
            prefix /= c_.m;
        }
        for (std::size_t i = 0; i < depth; ++i) {
            const auto var = c_.order[i];
            if (table_[var] != kUnset) {
                if (table_[var] != digits[i]) {
                    return false;
                }
                continue;
            }
            assign(var, digits[i]);
            if (!propagate()) {
                return false;
            }
        }
        return true;
    }

    void run(std::size_t from) { search(from); }

    PartitionResult& result() { return result_; }

private:
    void assign(std::uint32_t idx, State v) {
        table_[idx] = v;
        trail_.push_back(idx);
        for (auto w : c_.watch[idx]) {
            if (--pending_[w] == 0) {
                queue_.push_back(w);
            }
        }
    }

    bool propagate() {
        while (!queue_.empty()) {
            const auto w = queue_.back();
            queue_.pop_back();
            std::uint32_t outer = 0;
            for (std::size_t a = 0; a < c_.k; ++a) {
                outer = outer * c_.m + table_[c_.inner[w * c_.k + a]];
            }
            if (table_[outer] == kUnset) {
                assign(outer, c_.target[w]);
            } else if (table_[outer] != c_.target[w]) {
                queue_.clear();
                return false;
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            const auto idx = trail_.back();
            trail_.pop_back();
            for (auto w : c_.watch[idx]) {
                ++pending_[w];
            }
            table_[idx] = kUnset;
        }
    }

    bool halted() const { return result_.out_of_budget || result_.stopped; }

    void search(std::size_t pos) {
        while (pos < c_.order.size() && table_[c_.order[pos]] != kUnset) {
            ++pos;
        }
        if (pos == c_.order.size()) {
            leaf();
            return;
        }
        const auto var = c_.order[pos];
        for (State v = 0; v < c_.m && !halted(); ++v) {
            if (result_.nodes >= budget_) {
                result_.out_of_budget = true;
                return;
            }
            ++result_.nodes;
            const auto mark = trail_.size();
            assign(var, v);
            if (propagate()) {
                search(pos + 1);
            } else {
                ++result_.square;
                if (pos < c_.diagonal_count) {
                    ++result_.diagonal;
                }
            }
            undo(mark);
        }
    }

    void leaf() {
        LocalRule1D rule(spec_.alphabet, spec_.neighborhood, table_);
        if (!is_involution(rule)) {
            throw VerificationFailure("enumeration produced a non-involution: " + describe(rule));
        }
        if (spec_.accept && !spec_.accept(rule)) {
            ++result_.hook;
            return;
        }
        if (spec_.on_found) {
            std::lock_guard lock(callback_mutex_);
            spec_.on_found(rule);
        }
        result_.found.push_back(std::move(rule));
        if (spec_.stop_after != 0 && result_.found.size() >= spec_.stop_after) {
            result_.stopped = true;
        }
    }

    const SquareConstraints& c_;
    const EnumerationSpec& spec_;
    std::uint64_t budget_;
    std::mutex& callback_mutex_;
    std::vector<State> table_;
    std::vector<std::uint32_t> pending_;
    std::vector<std::uint32_t> trail_;
    std::vector<std::uint32_t> queue_;
    PartitionResult result_;
};

} // namespace

SearchReport enumerate_involutions(const EnumerationSpec& spec) {
    if (spec.budget == 0) {
        throw InvalidInput("enumeration budget must be positive");
    }
    const SquareConstraints constraints(spec.alphabet, spec.neighborhood);
    const std::size_t depth = std::min(spec.partition_depth, constraints.order.size());
    const std::uint64_t partitions = checked_pow(spec.alphabet.size, depth, std::uint64_t{1} << 20);
    const std::uint64_t share = std::max<std::uint64_t>(1, spec.budget / partitions);

    std::vector<PartitionResult> results(partitions);
    std::mutex callback_mutex;
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const auto p = next.fetch_add(1);
            if (p >= partitions) {
                return;
            }
            try {
                SquareSolver solver(constraints, spec, share, callback_mutex);
                if (solver.seed(p, depth)) {
                    solver.run(depth);
                }
                results[p] = std::move(solver.result());
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(partitions)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    SearchReport report;
    report.alphabet = spec.alphabet;
    report.neighborhood = spec.neighborhood;
    report.budget = spec.budget;
    report.pruned = {{"diagonal", 0}, {"hook", 0}, {"square", 0}};
    bool out_of_budget = false;
    bool stopped = false;
    for (auto& r : results) {
        report.nodes += r.nodes;
        report.pruned["square"] += r.square;
        report.pruned["diagonal"] += r.diagonal;
        report.pruned["hook"] += r.hook;
        out_of_budget |= r.out_of_budget;
        stopped |= r.stopped;
        for (auto& rule : r.found) {
            report.found.push_back(std::move(rule));
        }
    }
    std::sort(report.found.begin(), report.found.end(),
              [](const LocalRule1D& a, const LocalRule1D& b) { return a.table() < b.table(); });
    if (spec.stop_after != 0 && report.found.size() > spec.stop_after) {
        report.found.erase(report.found.begin() + static_cast<std::ptrdiff_t>(spec.stop_after), report.found.end());
    }
    report.stopped_early = stopped;
    report.exhausted = !out_of_budget && !stopped;
    return report;
}

// ---------------------------------------------------------------- additive

LocalRule1D additive_rule(const AdditiveCoefficients& c) {
    const Alphabet m(c.modulus);
    return LocalRule1D::from_function(m, m, Neighborhood::window(-c.radius, c.radius),
                                      [&](std::span<const State> x) {
                                          std::uint64_t sum = 0;
                                          for (std::size_t i = 0; i < x.size(); ++i) {
                                              sum += std::uint64_t{c.coeffs[i]} * x[i];
                                          }
                                          return static_cast<State>(sum % c.modulus);
                                      });
}

bool additive_square_is_identity(const AdditiveCoefficients& c) {
    const int r = c.radius;
    for (int j = -2 * r; j <= 2 * r; ++j) {
        std::uint64_t sum = 0;
        for (int i = std::max(-r, j - r); i <= std::min(r, j + r); ++i) {
            sum += std::uint64_t{c.at(i)} * c.at(j - i);
        }
        if (sum % c.modulus != (j == 0 ? 1u % c.modulus : 0u)) {
            return false;
        }
    }
    return true;
}

std::vector<AdditiveCoefficients> solve_additive_involutions(std::uint32_t m, int r) {
    if (m < 1 || r < 0) {
        throw InvalidInput("additive solver needs m >= 1 and r >= 0");
    }
    const std::size_t len = static_cast<std::size_t>(2 * r + 1);
    const auto count = checked_pow(m, len);
    std::vector<AdditiveCoefficients> out;
    std::vector<State> a(len, 0);
    for (std::uint64_t code = 0; code < count; ++code) {
        AdditiveCoefficients c(m, r, a);
        if (additive_square_is_identity(c)) {
            if (!is_involution(additive_rule(c))) {
                throw VerificationFailure("additive condition accepted a non-involution");
            }
            out.push_back(std::move(c));
        }
        for (std::size_t d = len; d-- > 0;) {
            if (++a[d] < m) {
                break;
            }
            a[d] = 0;
        }
    }
    return out;
}

// ------------------------------------------------------------ permutativity

namespace {

// Is the minimized rule bijective in the digit with weight `weight`?
bool permutative_in(const LocalRule1D& f, std::uint64_t weight) {
    const std::uint32_t m = f.input_alphabet().size;
    const auto& t = f.table();
    std::vector<bool> seen(m);
    for (std::uint64_t idx = 0; idx < t.size(); ++idx) {
        if ((idx / weight) % m != 0) {
            continue;
        }
        std::fill(seen.begin(), seen.end(), false);
        for (std::uint32_t v = 0; v < m; ++v) {
            const State out = t[idx + v * weight];
            if (seen[out]) {
                return false;
            }
            seen[out] = true;
        }
    }
    return true;
}

} // namespace

bool is_left_permutative(const LocalRule1D& f) {
    const LocalRule1D g = minimize_neighborhood(f);
    if (g.input_alphabet() != g.output_alphabet()) {
        return false;
    }
    if (g.neighborhood().empty()) {
        return g.input_alphabet().size == 1;
    }
    const std::uint64_t weight = checked_pow(g.input_alphabet().size, g.neighborhood().size() - 1);
    return permutative_in(g, weight);
}

bool is_right_permutative(const LocalRule1D& f) {
    const LocalRule1D g = minimize_neighborhood(f);
    if (g.input_alphabet() != g.output_alphabet()) {
        return false;
    }
    if (g.neighborhood().empty()) {
        return g.input_alphabet().size == 1;
    }
    return permutative_in(g, 1);
}

bool is_one_way_right(const LocalRule1D& f) {
    const LocalRule1D g = minimize_neighborhood(f);
    return g.neighborhood().empty() || g.neighborhood().min() >= 0;
}

bool is_one_way_left(const LocalRule1D& f) {
    const LocalRule1D g = minimize_neighborhood(f);
    return g.neighborhood().empty() || g.neighborhood().max() <= 0;
}

} // namespace tsca
