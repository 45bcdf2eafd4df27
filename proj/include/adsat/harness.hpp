#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adsat/anneal.hpp"
#include "adsat/complete.hpp"
#include "adsat/instance.hpp"
#include "adsat/satcore.hpp"

namespace adsat {

/// complete: Gray-code enumeration; exact: cover search (same verdicts,
/// usable far beyond the enumeration cap); sa / iv: annealers; adsat2: K=2.
enum class Algorithm { complete, sa, iv, adsat2, exact };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// One grid point of a sweep: a clause density for the random ensemble or a
/// degree L for regular graphs.
struct GridPoint {
    double alpha = 0.0;
    std::size_t l_degree = 0;
    std::size_t m = 0;
};

struct SweepConfig {
    std::size_t n = 0;
    std::size_t k = 3;
    EnsembleKind kind = EnsembleKind::random_uniform;
    std::vector<double> alpha_grid;      // random ensemble
    std::vector<std::size_t> l_grid;     // regular ensemble
    std::size_t graphs = 100;
    Algorithm algorithm = Algorithm::complete;
    std::uint64_t iters = 500;
    std::uint64_t restarts = 100;
    std::optional<std::uint64_t> delta_m;   // defaults to ceil(N/2)
    std::uint64_t master_seed = 1;
    CountOptions counting;
    CompleteOptions complete;
    CoverSearchOptions search;

    /// Grid points in the order given; throws ParameterError on invalid values.
    std::vector<GridPoint> points() const;
    std::uint64_t effective_delta_m() const { return delta_m ? *delta_m : default_delta_m(n); }
};

/// Evenly spaced grid lo, lo+step, ... up to hi (inclusive within 1e-9).
std::vector<double> make_grid(double lo, double hi, double step);

enum class GraphStatus { sat, unsat, budget_error, cap_error };

const char* to_string(GraphStatus s);

struct GraphResult {
    GraphStatus status = GraphStatus::sat;
    /// Minimum complexity found (annealers only; NaN otherwise).
    double sigma = 0.0;
    std::optional<std::uint64_t> r_g;
    std::optional<NegationAssignment> witness;
};

/// Instance for graph `g` of a grid point. Seeds depend only on the master
/// seed, the ensemble, N, M (or L) and g, never on the grid position.
AdsatInstance sweep_instance(const SweepConfig& cfg, const GridPoint& point, std::size_t g);

/// Runs the configured algorithm on one graph.
GraphResult run_graph(const SweepConfig& cfg, const GridPoint& point, std::size_t g);

struct SweepRecord {
    std::size_t n = 0;
    GridPoint point;
    std::size_t graphs = 0;
    std::size_t unsat = 0;
    double phi_unsat = 0.0;
    double sigma_mean = 0.0;
    double sigma_std = 0.0;
    double log2rg_mean = 0.0;   // mean of log2(r_G)/N over graphs made UNSAT
    double log2rg_std = 0.0;
    std::size_t rg_count = 0;
    std::size_t budget_errors = 0;
    std::size_t cap_errors = 0;
    double wall_seconds = 0.0;
    /// Per-graph results in graph order; empty for records read back from CSV.
    std::vector<GraphResult> details;
};

/// Aggregates per-graph results. Sigma statistics use every graph that has a
/// sigma; r_G statistics only the graphs made UNSAT. Standard deviations are
/// sample deviations (NaN below two values).
SweepRecord aggregate(std::size_t n, const GridPoint& point, std::vector<GraphResult> results);

struct SweepOutput {
    std::string csv_path;   // empty: no file
    bool resume = false;
};

/// Parallel sweep: graphs of a point run on an OpenMP worker pool and are
/// aggregated in graph order, so the result equals run_sweep_serial.
/// Each finished point is appended to the CSV immediately; with resume,
/// points already present in the file are read back instead of recomputed.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, const SweepOutput& output = {});

/// Single-threaded reference implementation of run_sweep.
std::vector<SweepRecord> run_sweep_serial(const SweepConfig& cfg, const SweepOutput& output = {});

// CSV. The first line is the schema tag, the second the column header, then
// one row per grid point. wall_seconds is the only non-deterministic column
// and is always last.
inline constexpr const char* kCsvSchema = "# adsat-sweep v1";
std::string csv_header();
std::string csv_row(const SweepConfig& cfg, const SweepRecord& rec);
/// Parses rows written by csv_row. With `expect`, the configuration columns
/// must match it.
std::vector<SweepRecord> read_csv(std::istream& in, const SweepConfig* expect = nullptr);

/// Critical density where the fitted Phi_UNSAT crosses 1/2.
struct AlphaStar {
    double value = 0.0;
    /// The data does not have points on both sides of 1/2.
    bool no_straddle = false;
};

/// Takes the five points closest to Phi = 1/2 (ties by alpha distance to the
/// closest point, then lower alpha), fits a
/// least-squares line Phi(alpha) and solves Phi = 1/2. Needs >= 5 points.
/// A zero slope throws ParameterError unless the data does not straddle 1/2,
/// in which case the value is NaN and no_straddle is set.
AlphaStar alpha_star(const std::vector<std::pair<double, double>>& alpha_phi);
AlphaStar alpha_star(const std::vector<SweepRecord>& records);

/// gamma = N / log2 R; R must be at least 2.
double gamma_of(std::size_t n, std::uint64_t restarts);

/// Phi_UNSAT recomputed as if only `restarts` restarts had been allowed.
/// Restarts consume one random stream in order, so a run with fewer restarts
/// is a prefix of a longer one: a graph counts as UNSAT iff r_G <= restarts.
double phi_at_restarts(const SweepRecord& rec, std::uint64_t restarts);

struct CurvePoint {
    std::uint64_t restarts = 0;
    double gamma = 0.0;
    AlphaStar alpha_star;
};

struct AlphaStarCurve {
    std::vector<CurvePoint> points;
    /// The last two alpha* values differ by less than the plateau tolerance.
    bool plateau = false;
};

/// alpha*_N(gamma) for each restart budget in `restart_grid` (ascending).
/// Runs one sweep at the largest budget and evaluates the smaller ones by
/// prefix, see phi_at_restarts.
AlphaStarCurve alpha_star_curve(SweepConfig cfg, const std::vector<std::uint64_t>& restart_grid,
                                double plateau_eps = 0.05);
AlphaStarCurve alpha_star_curve(const std::vector<SweepRecord>& records, std::size_t n,
                                const std::vector<std::uint64_t>& restart_grid, double plateau_eps = 0.05);

struct BalanceStats {
    std::size_t configurations = 0;   // UNSAT witnesses examined
    std::size_t balanced = 0;
    double fraction = 0.0;            // NaN without witnesses
    double ci95 = 0.0;                // normal-approximation half width
};

/// Fraction of UNSAT witnesses in which every bit has
/// |#negated - #plain| <= 1. Entries without a witness are skipped.
BalanceStats balance_statistics(const std::vector<AdsatInstance>& instances,
                                const std::vector<std::optional<NegationAssignment>>& witnesses);

} // namespace adsat
