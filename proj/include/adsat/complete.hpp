#pragma once

#include <cstdint>
#include <optional>

#include "adsat/instance.hpp"
#include "adsat/satcore.hpp"

namespace adsat {

/// Outcome of an exact AdSAT decision. The witness is present iff UNSAT and
/// always materializes to a DPLL-UNSAT formula.
struct AdsatVerdict {
    SatStatus status = SatStatus::sat;
    std::optional<NegationAssignment> witness_negations;
    std::uint64_t configs_tested = 0;

    bool is_unsat() const noexcept { return status == SatStatus::unsat; }
};

/// How each enumerated formula is tested. `truth_table` keeps one bitset over
/// all 2^N assignments per clause pattern and only works for small N;
/// `automatic` uses it up to kTruthTableMaxBits and DPLL above.
enum class SatCheck { automatic, dpll, truth_table };

inline constexpr std::size_t kTruthTableMaxBits = 12;

struct CompleteOptions {
    /// Refuse instances with more than this many free negations (KM - N).
    std::size_t max_free_edges = 30;
    SatCheck check = SatCheck::automatic;
};

/// Exhaustive decider: enumerates every assignment of the free negations
/// (frozen first occurrences pinned to 0) in Gray-code order over the free
/// edges in (clause, slot) order and tests each formula. Stops at the first
/// UNSAT formula, whose witness is re-checked with dpll_solve. Throws
/// CapExceeded above the enumeration cap.
AdsatVerdict complete_adsat(const AdsatInstance& inst, const CompleteOptions& opts = {});

inline constexpr std::size_t kCoverSearchMaxBits = 16;

struct CoverSearchOptions {
    /// Abort with BudgetExceeded after this many search nodes (0 = unlimited).
    std::uint64_t node_budget = 0;
};

/// Exact decider that searches the adversary's choices directly instead of
/// enumerating them. Clause a with negation pattern p falsifies the subcube
/// x_{aj} = J_aj, and the formula is UNSAT iff these subcubes cover {0,1}^N.
/// The search picks the uncovered assignment with the fewest clauses able to
/// cover it and branches over those clauses, pruning when the largest
/// possible remaining coverage is below the uncovered count. Same verdicts as
/// complete_adsat; configs_tested counts search nodes. Needs N <= 16.
AdsatVerdict cover_search_adsat(const AdsatInstance& inst, const CoverSearchOptions& opts = {});

} // namespace adsat
