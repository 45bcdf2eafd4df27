#include "adsat/satcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "adsat/errors.hpp"

namespace adsat {

const char* to_string(SatStatus s) { return s == SatStatus::sat ? "SAT" : "UNSAT"; }

CnfFormula materialize(const AdsatInstance& inst, const NegationAssignment& neg) {
    if (!neg.matches(inst)) throw InvalidInstance("negation shape does not match instance");
    CnfFormula f(static_cast<std::uint32_t>(inst.n_bits()));
    std::vector<Literal> clause(inst.k());
    for (std::size_t a = 0; a < inst.n_clauses(); ++a) {
        for (std::size_t j = 0; j < inst.k(); ++j) clause[j] = Literal(inst.bit(a, j), neg.get(a, j));
        f.add_clause(clause);
    }
    return f;
}

namespace {

constexpr std::int8_t kUnassigned = -1;

// Assignment trail with occurrence-list unit propagation, shared by the
// decision procedure and the counter.
class SearchState {
public:
    explicit SearchState(const CnfFormula& f) : f_(f), value_(f.n_vars(), kUnassigned) {
        // CSR occurrence lists indexed by literal code.
        const std::size_t n_codes = 2 * static_cast<std::size_t>(f.n_vars());
        occ_start_.assign(n_codes + 1, 0);
        for (std::size_t c = 0; c < f.n_clauses(); ++c)
            for (Literal l : f.clause(c)) ++occ_start_[l.code() + 1];
        std::partial_sum(occ_start_.begin(), occ_start_.end(), occ_start_.begin());
        occ_.resize(f.n_literals());
        std::vector<std::size_t> fill(occ_start_.begin(), occ_start_.end() - 1);
        for (std::size_t c = 0; c < f.n_clauses(); ++c)
            for (Literal l : f.clause(c)) occ_[fill[l.code()]++] = static_cast<std::uint32_t>(c);
        trail_.reserve(f.n_vars());
    }

    bool is_true(Literal l) const {
        const auto v = value_[l.var()];
        return v != kUnassigned && l.satisfied_by(v != 0);
    }
    bool assigned(std::uint32_t var) const { return value_[var] != kUnassigned; }

    // Makes `l` true. Returns false if it is already false.
    bool assign(Literal l) {
        const auto v = value_[l.var()];
        if (v != kUnassigned) return l.satisfied_by(v != 0);
        value_[l.var()] = l.negated() ? 0 : 1;
        trail_.push_back(l);
        return true;
    }

    // Seeds units and detects empty clauses; false on immediate conflict.
    bool seed_units() {
        for (std::size_t c = 0; c < f_.n_clauses(); ++c) {
            auto cl = f_.clause(c);
            if (cl.empty()) return false;
            if (cl.size() == 1 && !assign(cl[0])) return false;
        }
        return true;
    }

    // Unit propagation over everything on the trail not yet processed.
    bool propagate() {
        while (qhead_ < trail_.size()) {
            const Literal falsified = ~trail_[qhead_++];
            for (std::size_t i = occ_start_[falsified.code()]; i < occ_start_[falsified.code() + 1]; ++i) {
                const auto c = occ_[i];
                Literal unit{};
                std::size_t open = 0;
                bool sat = false;
                for (Literal l : f_.clause(c)) {
                    const auto v = value_[l.var()];
                    if (v == kUnassigned) {
                        ++open;
                        unit = l;
                    } else if (l.satisfied_by(v != 0)) {
                        sat = true;
                        break;
                    }
                }
                if (sat) continue;
                if (open == 0) return false;
                if (open == 1) assign(unit);
            }
        }
        return true;
    }

    std::size_t mark() const { return trail_.size(); }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            value_[trail_.back().var()] = kUnassigned;
            trail_.pop_back();
        }
        qhead_ = std::min(qhead_, mark);
    }

    bool clause_satisfied(std::size_t c) const {
        for (Literal l : f_.clause(c))
            if (is_true(l)) return true;
        return false;
    }

    const CnfFormula& formula() const { return f_; }
    std::span<const std::int8_t> values() const { return value_; }

protected:
    const CnfFormula& f_;
    std::vector<std::int8_t> value_;
    std::vector<Literal> trail_;
    std::size_t qhead_ = 0;
    std::vector<std::size_t> occ_start_;
    std::vector<std::uint32_t> occ_;
};

// ---------------------------------------------------------------------------
// Decision

class Dpll : public SearchState {
public:
    using SearchState::SearchState;

    bool solve() {
        if (!seed_units()) return false;
        pos_.assign(f_.n_vars(), 0);
        neg_.assign(f_.n_vars(), 0);
        return search();
    }

private:
    bool search() {
        if (!propagate()) return false;
        std::uint32_t branch = 0;
        for (;;) {
            std::fill(pos_.begin(), pos_.end(), 0);
            std::fill(neg_.begin(), neg_.end(), 0);
            bool any_active = false;
            for (std::size_t c = 0; c < f_.n_clauses(); ++c) {
                if (clause_satisfied(c)) continue;
                any_active = true;
                for (Literal l : f_.clause(c))
                    if (!assigned(l.var())) ++(l.negated() ? neg_ : pos_)[l.var()];
            }
            if (!any_active) return true;

            bool assigned_pure = false;
            std::uint32_t best_count = 0;
            for (std::uint32_t v = 0; v < f_.n_vars(); ++v) {
                if (assigned(v)) continue;
                if (pos_[v] > 0 && neg_[v] == 0) {
                    assign(Literal(v, false));
                    assigned_pure = true;
                } else if (neg_[v] > 0 && pos_[v] == 0) {
                    assign(Literal(v, true));
                    assigned_pure = true;
                } else if (pos_[v] + neg_[v] > best_count) {
                    best_count = pos_[v] + neg_[v];
                    branch = v;
                }
            }
            if (!assigned_pure) break;
            // Pure literals cannot falsify a clause, but they can satisfy some.
            propagate();
        }

        const auto m = mark();
        for (bool value : {true, false}) {
            assign(Literal(branch, !value));
            if (search()) return true;
            undo_to(m);
        }
        return false;
    }

    std::vector<std::uint32_t> pos_, neg_;
};

// ---------------------------------------------------------------------------
// Counting

template <class Count>
class Counter : public SearchState {
public:
    Counter(const CnfFormula& f, std::uint64_t budget)
        : SearchState(f), budget_(budget), stamp_(f.n_vars(), 0), local_(f.n_vars(), 0),
          freq_(f.n_vars(), 0) {}

    Count run() {
        if (!seed_units()) return Count(0);
        std::vector<std::uint32_t> clauses(f_.n_clauses()), vars(f_.n_vars());
        std::iota(clauses.begin(), clauses.end(), 0u);
        std::iota(vars.begin(), vars.end(), 0u);
        return count(clauses, vars);
    }

private:
    static Count pow2(std::size_t e) { return Count(1) << e; }

    Count count(const std::vector<std::uint32_t>& clauses, const std::vector<std::uint32_t>& vars) {
        if (budget_ != 0 && ++nodes_ > budget_) throw BudgetExceeded("model counting node budget exhausted");
        const auto m = mark();
        if (!propagate()) {
            undo_to(m);
            return Count(0);
        }

        std::vector<std::uint32_t> active;
        active.reserve(clauses.size());
        for (auto c : clauses)
            if (!clause_satisfied(c)) active.push_back(c);

        std::size_t unassigned = 0;
        for (auto v : vars) unassigned += assigned(v) ? 0 : 1;
        if (active.empty()) {
            undo_to(m);
            return pow2(unassigned);
        }

        // Variables of the active clauses, with union-find over them.
        ++epoch_;
        std::vector<std::uint32_t> avars;
        for (auto c : active)
            for (Literal l : f_.clause(c)) {
                const auto v = l.var();
                if (assigned(v)) continue;
                if (stamp_[v] != epoch_) {
                    stamp_[v] = epoch_;
                    local_[v] = static_cast<std::uint32_t>(avars.size());
                    avars.push_back(v);
                    freq_[v] = 0;
                }
                ++freq_[v];
            }
        const std::size_t free_vars = unassigned - avars.size();

        std::vector<std::uint32_t> parent(avars.size());
        std::iota(parent.begin(), parent.end(), 0u);
        auto find = [&](std::uint32_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto c : active) {
            std::uint32_t root = UINT32_MAX;
            for (Literal l : f_.clause(c)) {
                if (assigned(l.var())) continue;
                const auto r = find(local_[l.var()]);
                if (root == UINT32_MAX) root = r;
                else if (r != root) parent[r] = root;
            }
        }
        std::vector<std::uint32_t> comp_of(avars.size());
        std::vector<std::uint32_t> comp_index(avars.size(), UINT32_MAX);
        std::uint32_t n_comp = 0;
        for (std::uint32_t i = 0; i < avars.size(); ++i) {
            const auto r = find(i);
            if (comp_index[r] == UINT32_MAX) comp_index[r] = n_comp++;
            comp_of[i] = comp_index[r];
        }

        Count result(0);
        if (n_comp > 1) {
            std::vector<std::vector<std::uint32_t>> comp_clauses(n_comp), comp_vars(n_comp);
            for (std::uint32_t i = 0; i < avars.size(); ++i) comp_vars[comp_of[i]].push_back(avars[i]);
            for (auto c : active) {
                for (Literal l : f_.clause(c)) {
                    if (assigned(l.var())) continue;
                    comp_clauses[comp_of[local_[l.var()]]].push_back(c);
                    break;
                }
            }
            result = Count(1);
            for (std::uint32_t k = 0; k < n_comp && result != 0; ++k)
                result *= count(comp_clauses[k], comp_vars[k]);
        } else {
            std::uint32_t branch = avars[0];
            for (auto v : avars)
                if (freq_[v] > freq_[branch] || (freq_[v] == freq_[branch] && v < branch)) branch = v;
            const auto m2 = mark();
            for (bool value : {true, false}) {
                assign(Literal(branch, !value));
                result += count(active, avars);
                undo_to(m2);
            }
        }
        undo_to(m);
        return result == 0 ? result : Count(result << free_vars);
    }

    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::uint32_t epoch_ = 0;
    std::vector<std::uint32_t> stamp_, local_, freq_;
};

} // namespace

SatResult dpll_solve(const CnfFormula& f) {
    Dpll solver(f);
    SatResult result;
    if (!solver.solve()) return result;

    std::vector<std::uint8_t> witness(f.n_vars());
    const auto values = solver.values();
    for (std::uint32_t v = 0; v < f.n_vars(); ++v) witness[v] = values[v] == 0 ? 0 : 1;
    if (!f.satisfied_by(witness)) throw std::logic_error("dpll_solve produced a non-satisfying witness");
    result.status = SatStatus::sat;
    result.witness = std::move(witness);
    return result;
}

namespace {

std::uint64_t count_by_truth_table(const CnfFormula& f) {
    const std::size_t n = f.n_vars();
    const std::size_t points = std::size_t{1} << n;
    const std::size_t words = (points + 63) / 64;
    // In-word patterns of the low six variables.
    static constexpr std::uint64_t kLow[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                             0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
    // Variables >= 6 select whole words: the clause touches only the words
    // whose index bits match its high literals.
    const std::size_t word_bits = words - 1;
    std::vector<std::uint64_t> covered(words, 0);
    for (std::size_t c = 0; c < f.n_clauses(); ++c) {
        std::uint64_t low = ~std::uint64_t{0};
        std::size_t high_mask = 0, high_value = 0;
        for (const Literal lit : f.clause(c)) {
            const std::size_t v = lit.var();
            // A literal is false where x_v equals its negation flag.
            if (v < 6) {
                low &= lit.negated() ? kLow[v] : ~kLow[v];
            } else {
                high_mask |= std::size_t{1} << (v - 6);
                if (lit.negated()) high_value |= std::size_t{1} << (v - 6);
            }
        }
        const std::size_t free_bits = word_bits & ~high_mask;
        std::size_t sub = 0;
        do {
            covered[high_value | sub] |= low;
            sub = (sub - free_bits) & free_bits;
        } while (sub != 0);
    }
    if (points < 64) covered[0] &= (std::uint64_t{1} << points) - 1;
    std::uint64_t hit = 0;
    for (const auto w : covered) hit += static_cast<std::uint64_t>(std::popcount(w));
    return points - hit;
}

} // namespace

ModelCount count_models(const CnfFormula& f, const CountOptions& opts) {
    const bool table_fits = f.n_vars() <= kTruthTableCountMaxVars;
    if (opts.method == CountMethod::truth_table && !table_fits)
        throw ParameterError("truth-table counting needs N <= " + std::to_string(kTruthTableCountMaxVars));
    if (opts.method == CountMethod::truth_table || (opts.method == CountMethod::automatic && table_fits))
        return ModelCount(count_by_truth_table(f));
    if (f.n_vars() < 64) return ModelCount(Counter<std::uint64_t>(f, opts.node_budget).run());
    return Counter<ModelCount>(f, opts.node_budget).run();
}

double sigma_from_count(const ModelCount& count, std::size_t n_bits) {
    if (count == 0) return 0.0;
    const ModelCount s1 = count + 1;
    // Split off the exponent so values beyond double range still convert.
    const auto msb = boost::multiprecision::msb(s1);
    double log2v;
    if (msb < 1000) {
        log2v = std::log2(s1.convert_to<double>());
    } else {
        const auto shift = msb - 60;
        log2v = static_cast<double>(shift) + std::log2(ModelCount(s1 >> shift).convert_to<double>());
    }
    return log2v / static_cast<double>(n_bits);
}

Complexity complexity(const CnfFormula& f, const CountOptions& opts) {
    Complexity c;
    c.count = count_models(f, opts);
    c.sigma = sigma_from_count(c.count, f.n_vars());
    return c;
}

Complexity complexity(const AdsatInstance& inst, const NegationAssignment& neg, const CountOptions& opts) {
    return complexity(materialize(inst, neg), opts);
}

} // namespace adsat
