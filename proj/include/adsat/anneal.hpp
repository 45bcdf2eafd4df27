#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>

#include "adsat/instance.hpp"
#include "adsat/rng.hpp"
#include "adsat/satcore.hpp"

namespace adsat {

/// Inverse-temperature schedule beta(t) = 2 sqrt(t / chunks) for global step
/// t = 1 .. chunks * steps_per_chunk. chunks = 1 is the plain schedule
/// beta = 2 sqrt(t); with chunks = dM + 1 the last chunk ends at 2 sqrt(I).
struct Schedule {
    std::uint64_t steps_per_chunk = 0;
    std::uint64_t chunks = 1;

    static Schedule plain(std::uint64_t iters) { return {iters, 1}; }
    static Schedule chunked(std::uint64_t iters, std::uint64_t delta_m) { return {iters, delta_m + 1}; }

    double beta(std::uint64_t t) const {
        return 2.0 * std::sqrt(static_cast<double>(t) / static_cast<double>(chunks));
    }
    std::uint64_t total_steps() const { return steps_per_chunk * chunks; }
};

/// One proposed move, reported to an optional trace callback.
struct TraceRow {
    std::uint64_t t = 0;
    double beta = 0.0;
    double sigma = 0.0;
    bool accepted = false;
};
using TraceSink = std::function<void(const TraceRow&)>;

struct AnnealOptions {
    CountOptions counting;
    /// Inverse temperature used instead of the schedule when set; infinity
    /// gives the greedy limit that only accepts strict improvements.
    std::optional<double> fixed_beta;
    TraceSink trace;
};

struct AnnealOutcome {
    double sigma_star = 0.0;
    NegationAssignment last_negations;
    std::optional<NegationAssignment> unsat_witness;
    std::uint64_t steps_used = 0;

    bool found_unsat() const noexcept { return unsat_witness.has_value(); }
};

/// Metropolis annealing over the free negations of `inst`, starting from j0.
/// Each step flips one uniformly chosen free edge. A move to an UNSAT formula
/// returns at once; a strictly lower complexity is accepted; otherwise the move
/// is accepted when exp(-beta (S' - S)) > eta with eta uniform in [0,1).
/// `first_step` is the global step preceding this run, so beta is evaluated at
/// first_step + 1 .. first_step + steps. UNSAT witnesses are re-checked with
/// dpll_solve before returning.
AnnealOutcome sa_adsat(const AdsatInstance& inst, const NegationAssignment& j0, std::uint64_t steps,
                       const Schedule& schedule, Rng& rng, const AnnealOptions& opts = {},
                       std::uint64_t first_step = 0);

struct RestartOutcome {
    double sigma_star = 0.0;
    /// 1-based restart at which the instance was made UNSAT.
    std::optional<std::uint64_t> r_g;
    std::optional<NegationAssignment> witness;
    std::uint64_t restarts_run = 0;
    std::uint64_t steps_used = 0;

    bool found_unsat() const noexcept { return r_g.has_value(); }
};

/// Up to `restarts` runs of sa_adsat from fresh random balanced negations on
/// the plain schedule; stops at the first UNSAT.
RestartOutcome restart_sa(const AdsatInstance& inst, std::uint64_t restarts, std::uint64_t iters, Rng& rng,
                          const AnnealOptions& opts = {});

/// Clause-peeling variant. Each restart appends `delta_m` fresh random clauses,
/// starts from the alternately balanced negations of the expanded formula and
/// anneals phi_dM, phi_dM-1, ..., phi_0 in chunks of at most `iters` steps on
/// the chunked schedule, dropping the most recently added clause between
/// chunks and carrying over the UNSAT witness or the last accepted negations.
/// A chunk that makes its formula UNSAT ends early and the global step jumps
/// to the start of the next chunk. Only UNSAT of phi_0 ends the search.
RestartOutcome improved_variant(const AdsatInstance& inst, std::uint64_t delta_m, std::uint64_t restarts,
                                std::uint64_t iters, Rng& rng, const AnnealOptions& opts = {});

/// Default clause expansion: ceil(N / 2).
inline std::uint64_t default_delta_m(std::size_t n_bits) { return (n_bits + 1) / 2; }

} // namespace adsat
