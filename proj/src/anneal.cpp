#include "adsat/anneal.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adsat/errors.hpp"

namespace adsat {

namespace {

void verify_unsat_witness(const CnfFormula& f) {
    if (dpll_solve(f).is_sat())
        throw std::logic_error("model counter reported UNSAT for a satisfiable formula");
}

} // namespace

AnnealOutcome sa_adsat(const AdsatInstance& inst, const NegationAssignment& j0, std::uint64_t steps,
                       const Schedule& schedule, Rng& rng, const AnnealOptions& opts,
                       std::uint64_t first_step) {
    if (!j0.matches(inst)) throw InvalidInstance("initial negations do not match instance");
    if (!j0.is_legal()) throw InvalidInstance("initial negations set a frozen edge");

    AnnealOutcome out;
    out.last_negations = j0;
    NegationAssignment& current = out.last_negations;
    CnfFormula formula = materialize(inst, current);

    auto cost = complexity(formula, opts.counting);
    out.sigma_star = cost.sigma;
    if (cost.unsat()) {
        verify_unsat_witness(formula);
        out.sigma_star = 0.0;
        out.unsat_witness = current;
        return out;
    }

    const auto free = current.free_edges();
    if (free.empty()) return out;

    double sigma = cost.sigma;
    for (std::uint64_t t = 1; t <= steps; ++t) {
        const double beta = opts.fixed_beta ? *opts.fixed_beta : schedule.beta(first_step + t);
        const auto edge = free[rng.below(free.size())];
        formula.flip_literal(edge);
        const auto proposal = complexity(formula, opts.counting);
        out.steps_used = t;

        bool accepted;
        if (proposal.unsat()) {
            verify_unsat_witness(formula);
            current.flip(edge);
            if (opts.trace) opts.trace({first_step + t, beta, 0.0, true});
            out.sigma_star = 0.0;
            out.unsat_witness = current;
            return out;
        } else if (proposal.sigma < sigma) {
            accepted = true;
            if (proposal.sigma < out.sigma_star) out.sigma_star = proposal.sigma;
        } else {
            const double eta = rng.uniform01();
            const double delta = proposal.sigma - sigma;
            // Infinite beta is the greedy limit: nothing but strict improvements.
            const double weight = std::isinf(beta) ? 0.0 : std::exp(-beta * delta);
            accepted = weight > eta;
        }

        if (opts.trace) opts.trace({first_step + t, beta, proposal.sigma, accepted});
        if (accepted) {
            current.flip(edge);
            sigma = proposal.sigma;
        } else {
            formula.flip_literal(edge);
        }
        assert(current.is_legal());
    }
    return out;
}

RestartOutcome restart_sa(const AdsatInstance& inst, std::uint64_t restarts, std::uint64_t iters, Rng& rng,
                          const AnnealOptions& opts) {
    if (restarts == 0) throw ParameterError("restart_sa needs at least one restart");
    RestartOutcome out;
    out.sigma_star = std::numeric_limits<double>::infinity();
    const auto schedule = Schedule::plain(iters);
    for (std::uint64_t r = 1; r <= restarts; ++r) {
        const auto j0 = random_balanced_negations(inst, rng);
        auto run = sa_adsat(inst, j0, iters, schedule, rng, opts);
        out.restarts_run = r;
        out.steps_used += run.steps_used;
        if (run.found_unsat()) {
            out.sigma_star = 0.0;
            out.r_g = r;
            out.witness = std::move(run.unsat_witness);
            return out;
        }
        out.sigma_star = std::min(out.sigma_star, run.sigma_star);
    }
    return out;
}

RestartOutcome improved_variant(const AdsatInstance& inst, std::uint64_t delta_m, std::uint64_t restarts,
                                std::uint64_t iters, Rng& rng, const AnnealOptions& opts) {
    if (restarts == 0) throw ParameterError("improved_variant needs at least one restart");
    if (inst.n_clauses() + delta_m > choose(inst.n_bits(), inst.k()))
        throw ParameterError("expansion exceeds the number of distinct clauses C(N,K)");

    RestartOutcome out;
    out.sigma_star = std::numeric_limits<double>::infinity();
    const auto schedule = Schedule::chunked(iters, delta_m);
    const std::size_t m = inst.n_clauses();

    for (std::uint64_t r = 1; r <= restarts; ++r) {
        const auto expanded = inst.extended(draw_extra_clauses(inst, delta_m, rng));
        auto negs = alternately_balanced_negations(expanded);

        // Chunk c anneals phi_s with s = delta_m - c over global steps
        // c*I + 1 .. (c+1)*I.
        for (std::uint64_t c = 0; c < delta_m; ++c) {
            const auto phi = expanded.prefix(m + (delta_m - c));
            auto run = sa_adsat(phi, negs, iters, schedule, rng, opts, c * iters);
            out.steps_used += run.steps_used;
            const auto& carried = run.unsat_witness ? *run.unsat_witness : run.last_negations;
            negs = carried.prefix(m + (delta_m - c) - 1);
        }

        auto final_run = sa_adsat(inst, negs, iters, schedule, rng, opts, delta_m * iters);
        out.restarts_run = r;
        out.steps_used += final_run.steps_used;
        if (final_run.found_unsat()) {
            out.sigma_star = 0.0;
            out.r_g = r;
            out.witness = std::move(final_run.unsat_witness);
            return out;
        }
        out.sigma_star = std::min(out.sigma_star, final_run.sigma_star);
    }
    return out;
}

} // namespace adsat
