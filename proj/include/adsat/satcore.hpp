#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "adsat/cnf.hpp"
#include "adsat/instance.hpp"

namespace adsat {

/// Exact number of satisfying assignments; can reach 2^N for N beyond 64.
using ModelCount = boost::multiprecision::cpp_int;

enum class SatStatus { sat, unsat };

const char* to_string(SatStatus s);

struct SatResult {
    SatStatus status = SatStatus::unsat;
    /// One value per variable; present iff status == sat.
    std::optional<std::vector<std::uint8_t>> witness;

    bool is_sat() const noexcept { return status == SatStatus::sat; }
};

/// Clause a, slot j becomes the literal on bit x_{aj}, negated iff J_{aj} = 1.
/// The flat literal position of (a, j) is a*K + j.
CnfFormula materialize(const AdsatInstance& inst, const NegationAssignment& neg);

/// DPLL with unit propagation and pure-literal elimination. Branches on the
/// most frequent unassigned variable (lowest index on ties), true first.
/// Unassigned variables in a returned witness are set to 1. The witness is
/// checked against every clause before returning.
SatResult dpll_solve(const CnfFormula& f);

/// search: DPLL-style counter. truth_table: marks the assignments each clause
/// falsifies in a 2^N bitset, only for N <= kTruthTableCountMaxVars.
/// automatic picks the table up to that size and search above it.
enum class CountMethod { automatic, search, truth_table };

inline constexpr std::size_t kTruthTableCountMaxVars = 20;

struct CountOptions {
    /// Maximum number of search nodes; 0 means unlimited.
    std::uint64_t node_budget = 0;
    CountMethod method = CountMethod::automatic;
};

/// Exact model count over all n_vars variables. The search counter branches
/// with unit propagation, free-variable multiplication and connected-component
/// decomposition (no caching) and throws BudgetExceeded when the node budget
/// runs out; the truth-table counter has no budget.
ModelCount count_models(const CnfFormula& f, const CountOptions& opts = {});

/// (1/N) log2(S + 1). Zero exactly when S == 0.
double sigma_from_count(const ModelCount& count, std::size_t n_bits);

struct Complexity {
    ModelCount count;
    double sigma = 0.0;

    bool unsat() const { return count == 0; }
};

/// Complexity of the formula fixed by `neg`; propagates BudgetExceeded.
Complexity complexity(const AdsatInstance& inst, const NegationAssignment& neg,
                      const CountOptions& opts = {});
Complexity complexity(const CnfFormula& f, const CountOptions& opts = {});

} // namespace adsat
