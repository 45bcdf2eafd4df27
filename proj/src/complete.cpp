#include "adsat/complete.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <vector>

#include "adsat/errors.hpp"

namespace adsat {

namespace {

// Clause a with negation pattern p (bit j = J_aj) is falsified exactly on the
// subcube x_{aj} = J_aj, so a formula is UNSAT iff the falsified sets of its
// clauses cover all 2^N assignments.
class TruthTable {
public:
    explicit TruthTable(const AdsatInstance& inst)
        : k_(inst.k()),
          patterns_(std::size_t{1} << inst.k()),
          words_(((std::size_t{1} << inst.n_bits()) + 63) / 64),
          masks_(inst.n_clauses() * patterns_ * words_, 0),
          pattern_(inst.n_clauses(), 0) {
        const std::size_t points = std::size_t{1} << inst.n_bits();
        last_word_ = points % 64 == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << (points % 64)) - 1;
        for (std::size_t a = 0; a < inst.n_clauses(); ++a) {
            const auto bits = inst.clause(a);
            for (std::size_t x = 0; x < points; ++x) {
                std::size_t p = 0;
                for (std::size_t j = 0; j < k_; ++j) p |= ((x >> bits[j]) & 1u) << j;
                mask(a, p)[x / 64] |= std::uint64_t{1} << (x % 64);
            }
        }
    }

    void flip(std::size_t edge) { pattern_[edge / k_] ^= 1u << (edge % k_); }

    bool satisfiable() const {
        const std::size_t m = pattern_.size();
        for (std::size_t w = 0; w < words_; ++w) {
            const std::uint64_t full = w + 1 == words_ ? last_word_ : ~std::uint64_t{0};
            std::uint64_t covered = 0;
            for (std::size_t a = 0; a < m && covered != full; ++a)
                covered |= masks_[(a * patterns_ + pattern_[a]) * words_ + w];
            if (covered != full) return true;
        }
        return false;
    }

private:
    std::uint64_t* mask(std::size_t a, std::size_t p) { return &masks_[(a * patterns_ + p) * words_]; }

    std::size_t k_, patterns_, words_;
    std::uint64_t last_word_ = 0;
    std::vector<std::uint64_t> masks_;
    std::vector<std::uint32_t> pattern_;
};

class CoverSearch {
public:
    CoverSearch(const AdsatInstance& inst, const CoverSearchOptions& opts)
        : inst_(inst),
          budget_(opts.node_budget),
          k_(inst.k()),
          m_(inst.n_clauses()),
          patterns_(std::size_t{1} << inst.k()),
          points_(std::size_t{1} << inst.n_bits()),
          words_((points_ + 63) / 64),
          masks_(m_ * patterns_ * words_, 0),
          allowed_(m_ * patterns_, 0),
          pattern_(m_, kUnassigned),
          counts_(points_, 0) {
        const auto frozen = compute_frozen_mask(inst);
        for (std::size_t a = 0; a < m_; ++a) {
            std::size_t frozen_bits = 0;
            for (std::size_t j = 0; j < k_; ++j)
                if (frozen[a * k_ + j]) frozen_bits |= std::size_t{1} << j;
            for (std::size_t p = 0; p < patterns_; ++p) allowed_[a * patterns_ + p] = (p & frozen_bits) == 0;
            for (std::size_t x = 0; x < points_; ++x)
                mask(a, pattern_of(a, x))[x / 64] |= std::uint64_t{1} << (x % 64);
        }
    }

    AdsatVerdict run() {
        std::vector<std::uint64_t> covered(words_, 0);
        AdsatVerdict v;
        if (search(covered, points_)) {
            v.status = SatStatus::unsat;
            std::vector<std::uint8_t> values(inst_.n_edges(), 0);
            for (std::size_t a = 0; a < m_; ++a)
                if (pattern_[a] != kUnassigned)
                    for (std::size_t j = 0; j < k_; ++j) values[a * k_ + j] = (pattern_[a] >> j) & 1u;
            v.witness_negations = NegationAssignment(inst_, std::move(values));
            if (dpll_solve(materialize(inst_, *v.witness_negations)).is_sat())
                throw std::logic_error("cover_search_adsat: witness is satisfiable");
        }
        v.configs_tested = nodes_;
        return v;
    }

private:
    static constexpr std::uint32_t kUnassigned = ~std::uint32_t{0};

    std::uint64_t* mask(std::size_t a, std::size_t p) { return &masks_[(a * patterns_ + p) * words_]; }
    const std::uint64_t* mask(std::size_t a, std::size_t p) const { return &masks_[(a * patterns_ + p) * words_]; }

    std::size_t pattern_of(std::size_t a, std::size_t x) const {
        const auto bits = inst_.clause(a);
        std::size_t p = 0;
        for (std::size_t j = 0; j < k_; ++j) p |= ((x >> bits[j]) & 1u) << j;
        return p;
    }

    bool usable(std::size_t a, std::size_t p) const { return allowed_[a * patterns_ + p] != 0; }

    std::size_t new_coverage(std::size_t a, std::size_t p, const std::vector<std::uint64_t>& covered) const {
        const auto* mk = mask(a, p);
        std::size_t n = 0;
        for (std::size_t w = 0; w < words_; ++w) n += static_cast<std::size_t>(std::popcount(mk[w] & ~covered[w]));
        return n;
    }

    // True when the unassigned clauses can complete a cover; `uncovered` is
    // the number of zero bits in `covered`.
    bool search(std::vector<std::uint64_t>& covered, std::size_t uncovered) {
        if (uncovered == 0) return true;
        if (budget_ && nodes_ >= budget_) throw BudgetExceeded("cover search exceeded its node budget");
        ++nodes_;

        // Bound on what the unassigned clauses can still add, and for every
        // uncovered point the number of clauses that could cover it.
        std::fill(counts_.begin(), counts_.end(), 0);
        std::size_t reachable = 0;
        for (std::size_t a = 0; a < m_; ++a) {
            if (pattern_[a] != kUnassigned) continue;
            std::size_t best = 0;
            for (std::size_t p = 0; p < patterns_; ++p) {
                if (!usable(a, p)) continue;
                const auto* mk = mask(a, p);
                std::size_t gain = 0;
                for (std::size_t w = 0; w < words_; ++w) {
                    std::uint64_t fresh = mk[w] & ~covered[w];
                    gain += static_cast<std::size_t>(std::popcount(fresh));
                    while (fresh) {
                        ++counts_[w * 64 + static_cast<std::size_t>(std::countr_zero(fresh))];
                        fresh &= fresh - 1;
                    }
                }
                best = std::max(best, gain);
            }
            reachable += best;
        }
        if (reachable < uncovered) return false;

        std::size_t target = points_;
        std::uint32_t fewest = ~std::uint32_t{0};
        for (std::size_t x = 0; x < points_; ++x) {
            if ((covered[x / 64] >> (x % 64)) & 1u) continue;
            if (counts_[x] < fewest) {
                fewest = counts_[x];
                target = x;
            }
        }
        if (fewest == 0) return false;

        // Branch over the clauses able to cover `target`. A pattern tried and
        // refuted here is excluded from the later siblings.
        std::vector<std::pair<std::size_t, std::size_t>> banned;
        bool found = false;
        for (std::size_t a = 0; a < m_ && !found; ++a) {
            if (pattern_[a] != kUnassigned) continue;
            const auto p = pattern_of(a, target);
            if (!usable(a, p)) continue;
            const auto gain = new_coverage(a, p, covered);
            const auto saved = covered;
            const auto* mk = mask(a, p);
            for (std::size_t w = 0; w < words_; ++w) covered[w] |= mk[w];
            pattern_[a] = static_cast<std::uint32_t>(p);
            found = search(covered, uncovered - gain);
            if (found) break;
            pattern_[a] = kUnassigned;
            covered = saved;
            allowed_[a * patterns_ + p] = 0;
            banned.emplace_back(a, p);
        }
        for (const auto& [a, p] : banned) allowed_[a * patterns_ + p] = 1;
        return found;
    }

    const AdsatInstance& inst_;
    std::uint64_t budget_;
    std::size_t k_, m_, patterns_, points_, words_;
    std::vector<std::uint64_t> masks_;
    std::vector<std::uint8_t> allowed_;
    std::vector<std::uint32_t> pattern_;
    std::vector<std::uint32_t> counts_;
    std::uint64_t nodes_ = 0;
};

} // namespace

AdsatVerdict cover_search_adsat(const AdsatInstance& inst, const CoverSearchOptions& opts) {
    if (inst.n_bits() > kCoverSearchMaxBits)
        throw ParameterError("cover search needs N <= " + std::to_string(kCoverSearchMaxBits));
    return CoverSearch(inst, opts).run();
}

AdsatVerdict complete_adsat(const AdsatInstance& inst, const CompleteOptions& opts) {
    NegationAssignment neg(inst);
    const auto free = neg.free_edges();
    if (free.size() > opts.max_free_edges || free.size() >= 64)
        throw CapExceeded("instance has " + std::to_string(free.size()) +
                          " free negations, above the enumeration cap of " +
                          std::to_string(opts.max_free_edges));

    bool use_table = opts.check == SatCheck::truth_table;
    if (opts.check == SatCheck::automatic) use_table = inst.n_bits() <= kTruthTableMaxBits;
    if (use_table && inst.n_bits() > kTruthTableMaxBits)
        throw ParameterError("truth-table check needs N <= " + std::to_string(kTruthTableMaxBits));

    std::optional<TruthTable> table;
    std::optional<CnfFormula> f;
    if (use_table) table.emplace(inst);
    else f = materialize(inst, neg);

    const std::uint64_t total = std::uint64_t{1} << free.size();
    AdsatVerdict verdict;
    for (std::uint64_t g = 0; g < total; ++g) {
        if (g != 0) {
            // Reflected Gray code: step g toggles bit ctz(g).
            const auto edge = free[static_cast<std::size_t>(std::countr_zero(g))];
            neg.flip(edge);
            if (table) table->flip(edge);
            else f->flip_literal(edge);
        }
        ++verdict.configs_tested;
        const bool sat = table ? table->satisfiable() : dpll_solve(*f).is_sat();
        if (!sat) {
            if (dpll_solve(materialize(inst, neg)).is_sat())
                throw std::logic_error("complete_adsat: witness is satisfiable");
            verdict.status = SatStatus::unsat;
            verdict.witness_negations = neg;
            return verdict;
        }
    }
    return verdict;
}

} // namespace adsat
