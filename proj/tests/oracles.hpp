#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library beyond the data types.

#include <cstdint>
#include <vector>

#include "adsat/cnf.hpp"
#include "adsat/instance.hpp"
#include "adsat/rng.hpp"

namespace adsat::oracle {

// Satisfying assignments by trying all 2^N of them.
inline std::uint64_t brute_force_count(const CnfFormula& f) {
    const std::size_t n = f.n_vars();
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        bool all = true;
        for (std::size_t c = 0; c < f.n_clauses() && all; ++c) {
            bool any = false;
            for (const Literal lit : f.clause(c)) {
                const bool v = (x >> lit.var()) & 1u;
                if (v != lit.negated()) {
                    any = true;
                    break;
                }
            }
            all = any;
        }
        count += all;
    }
    return count;
}

// Random K-SAT formula: clauses of K distinct variables with random signs.
inline CnfFormula random_formula(std::size_t n, std::size_t m, std::size_t k, Rng& rng) {
    CnfFormula f(static_cast<std::uint32_t>(n));
    for (std::size_t c = 0; c < m; ++c) {
        std::vector<Literal> clause;
        while (clause.size() < k) {
            const auto v = static_cast<std::uint32_t>(rng.below(n));
            bool dup = false;
            for (const Literal l : clause) dup |= l.var() == v;
            if (!dup) clause.emplace_back(v, rng.below(2) == 1);
        }
        f.add_clause(clause);
    }
    return f;
}

// AdSAT by definition: some legal negation pattern leaves no model. Plain
// binary counting over the free edges, brute-force model counting inside.
inline bool brute_force_adsat_unsat(const AdsatInstance& inst) {
    const auto frozen = compute_frozen_mask(inst);
    std::vector<std::size_t> free;
    for (std::size_t e = 0; e < frozen.size(); ++e)
        if (!frozen[e]) free.push_back(e);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << free.size()); ++code) {
        CnfFormula f(static_cast<std::uint32_t>(inst.n_bits()));
        std::vector<std::uint8_t> neg(inst.n_edges(), 0);
        for (std::size_t i = 0; i < free.size(); ++i) neg[free[i]] = (code >> i) & 1u;
        for (std::size_t a = 0; a < inst.n_clauses(); ++a) {
            std::vector<Literal> clause;
            for (std::size_t j = 0; j < inst.k(); ++j)
                clause.emplace_back(inst.bit(a, j), neg[a * inst.k() + j] != 0);
            f.add_clause(clause);
        }
        if (brute_force_count(f) == 0) return true;
    }
    return false;
}

} // namespace adsat::oracle
