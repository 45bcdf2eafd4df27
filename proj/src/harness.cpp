#include "adsat/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "adsat/adsat2.hpp"
#include "adsat/errors.hpp"

namespace adsat {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::complete: return "complete";
    case Algorithm::sa: return "sa";
    case Algorithm::iv: return "iv";
    case Algorithm::adsat2: return "adsat2";
    case Algorithm::exact: return "exact";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "complete") return Algorithm::complete;
    if (s == "sa") return Algorithm::sa;
    if (s == "iv") return Algorithm::iv;
    if (s == "adsat2") return Algorithm::adsat2;
    if (s == "exact") return Algorithm::exact;
    throw ParameterError("unknown algorithm '" + s + "' (complete, exact, sa, iv, adsat2)");
}

const char* to_string(GraphStatus s) {
    switch (s) {
    case GraphStatus::sat: return "SAT";
    case GraphStatus::unsat: return "UNSAT";
    case GraphStatus::budget_error: return "budget-error";
    case GraphStatus::cap_error: return "cap-error";
    }
    return "?";
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) throw ParameterError("grid step must be positive");
    if (hi < lo) throw ParameterError("grid upper end below lower end");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double a = lo + static_cast<double>(i) * step;
        if (a > hi + 1e-9) break;
        grid.push_back(a);
    }
    return grid;
}

std::vector<GridPoint> SweepConfig::points() const {
    std::vector<GridPoint> out;
    if (kind == EnsembleKind::regular) {
        for (auto l : l_grid) {
            EnsembleParams p{n, k, kind, 0.0, l, 0};
            const auto m = p.n_clauses();
            out.push_back({static_cast<double>(m) / static_cast<double>(n), l, m});
        }
    } else {
        for (auto a : alpha_grid) {
            EnsembleParams p{n, k, kind, a, 0, 0};
            out.push_back({a, 0, p.n_clauses()});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-graph work

namespace {

std::uint64_t instance_seed(const SweepConfig& cfg, const GridPoint& point, std::size_t g) {
    const std::uint64_t ensemble = cfg.kind == EnsembleKind::regular ? 1 : 0;
    const std::uint64_t size_key = (ensemble << 48) ^ (std::uint64_t{cfg.k} << 32) ^ cfg.n;
    const std::uint64_t point_key = cfg.kind == EnsembleKind::regular ? point.l_degree : point.m;
    return child_seed(cfg.master_seed, size_key, point_key, g);
}

} // namespace

AdsatInstance sweep_instance(const SweepConfig& cfg, const GridPoint& point, std::size_t g) {
    Rng rng(instance_seed(cfg, point, g));
    if (cfg.kind == EnsembleKind::regular) return generate_regular_instance(cfg.n, point.l_degree, cfg.k, rng);
    return generate_random_instance(cfg.n, point.m, cfg.k, rng);
}

GraphResult run_graph(const SweepConfig& cfg, const GridPoint& point, std::size_t g) {
    const auto inst = sweep_instance(cfg, point, g);
    Rng rng(child_seed(instance_seed(cfg, point, g), 0x616c676fULL));
    GraphResult res;
    res.sigma = kNaN;
    AnnealOptions anneal_opts;
    anneal_opts.counting = cfg.counting;

    try {
        switch (cfg.algorithm) {
        case Algorithm::complete: {
            auto v = complete_adsat(inst, cfg.complete);
            res.status = v.is_unsat() ? GraphStatus::unsat : GraphStatus::sat;
            res.witness = std::move(v.witness_negations);
            break;
        }
        case Algorithm::exact: {
            auto v = cover_search_adsat(inst, cfg.search);
            res.status = v.is_unsat() ? GraphStatus::unsat : GraphStatus::sat;
            res.witness = std::move(v.witness_negations);
            break;
        }
        case Algorithm::adsat2: {
            res.status = decide_2adsat(inst).is_unsat() ? GraphStatus::unsat : GraphStatus::sat;
            break;
        }
        case Algorithm::sa:
        case Algorithm::iv: {
            auto out = cfg.algorithm == Algorithm::sa
                           ? restart_sa(inst, cfg.restarts, cfg.iters, rng, anneal_opts)
                           : improved_variant(inst, cfg.effective_delta_m(), cfg.restarts, cfg.iters, rng,
                                              anneal_opts);
            res.status = out.found_unsat() ? GraphStatus::unsat : GraphStatus::sat;
            res.sigma = out.sigma_star;
            res.r_g = out.r_g;
            res.witness = std::move(out.witness);
            break;
        }
        }
    } catch (const BudgetExceeded&) {
        res = GraphResult{GraphStatus::budget_error, kNaN, std::nullopt, std::nullopt};
    } catch (const CapExceeded&) {
        res = GraphResult{GraphStatus::cap_error, kNaN, std::nullopt, std::nullopt};
    }
    return res;
}

// ---------------------------------------------------------------------------
// Aggregation

namespace {

std::pair<double, double> mean_and_sample_std(const std::vector<double>& xs) {
    if (xs.empty()) return {kNaN, kNaN};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, kNaN};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

} // namespace

SweepRecord aggregate(std::size_t n, const GridPoint& point, std::vector<GraphResult> results) {
    SweepRecord rec;
    rec.n = n;
    rec.point = point;
    rec.graphs = results.size();
    std::vector<double> sigmas, log_rg;
    for (const auto& r : results) {
        switch (r.status) {
        case GraphStatus::unsat: ++rec.unsat; break;
        case GraphStatus::budget_error: ++rec.budget_errors; break;
        case GraphStatus::cap_error: ++rec.cap_errors; break;
        case GraphStatus::sat: break;
        }
        if (!std::isnan(r.sigma)) sigmas.push_back(r.sigma);
        if (r.r_g) log_rg.push_back(std::log2(static_cast<double>(*r.r_g)) / static_cast<double>(n));
    }
    rec.phi_unsat = rec.graphs ? static_cast<double>(rec.unsat) / static_cast<double>(rec.graphs) : kNaN;
    std::tie(rec.sigma_mean, rec.sigma_std) = mean_and_sample_std(sigmas);
    std::tie(rec.log2rg_mean, rec.log2rg_std) = mean_and_sample_std(log_rg);
    rec.rg_count = log_rg.size();
    rec.details = std::move(results);
    return rec;
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_header() {
    return "n,k,ensemble,alpha,l_degree,m,algorithm,graphs,iters,restarts,delta_m,seed,"
           "unsat,phi_unsat,sigma_mean,sigma_std,log2rg_over_n_mean,log2rg_over_n_std,rg_count,"
           "budget_errors,cap_errors,wall_seconds";
}

std::string csv_row(const SweepConfig& cfg, const SweepRecord& rec) {
    return fmt::format("{},{},{},{:.17g},{},{},{},{},{},{},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{},{:.6f}",
                       cfg.n, cfg.k, to_string(cfg.kind), rec.point.alpha, rec.point.l_degree, rec.point.m,
                       to_string(cfg.algorithm), rec.graphs, cfg.iters, cfg.restarts, cfg.effective_delta_m(),
                       cfg.master_seed, rec.unsat, rec.phi_unsat, rec.sigma_mean, rec.sigma_std,
                       rec.log2rg_mean, rec.log2rg_std, rec.rg_count, rec.budget_errors, rec.cap_errors,
                       rec.wall_seconds);
}

std::vector<SweepRecord> read_csv(std::istream& in, const SweepConfig* expect) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != kCsvSchema) throw ParseError("missing or unknown CSV schema tag", line_no);
    ++line_no;
    if (!std::getline(in, line) || line != csv_header()) throw ParseError("unexpected CSV header", line_no);

    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 22) throw ParseError("expected 22 CSV fields", line_no);

        auto u = [&](std::size_t i) {
            try {
                std::size_t used = 0;
                auto v = std::stoull(f[i], &used);
                if (used != f[i].size()) throw std::invalid_argument("trailing");
                return static_cast<std::uint64_t>(v);
            } catch (const std::exception&) {
                throw ParseError("bad integer field '" + f[i] + "'", line_no);
            }
        };
        auto d = [&](std::size_t i) {
            char* end = nullptr;
            const double v = std::strtod(f[i].c_str(), &end);
            if (f[i].empty() || *end != '\0') throw ParseError("bad numeric field '" + f[i] + "'", line_no);
            return v;
        };

        if (expect) {
            std::vector<std::string> e;
            std::stringstream es(csv_row(*expect, SweepRecord{}));
            for (std::string cell; std::getline(es, cell, ',');) e.push_back(cell);
            // n, k, ensemble, algorithm, iters, restarts, delta_m, seed
            for (std::size_t i : {0u, 1u, 2u, 6u, 8u, 9u, 10u, 11u})
                if (f[i] != e[i]) throw ParseError("CSV row was produced by a different configuration", line_no);
        }

        SweepRecord rec;
        rec.n = u(0);
        rec.point = {d(3), u(4), u(5)};
        rec.graphs = u(7);
        rec.unsat = u(12);
        rec.phi_unsat = d(13);
        rec.sigma_mean = d(14);
        rec.sigma_std = d(15);
        rec.log2rg_mean = d(16);
        rec.log2rg_std = d(17);
        rec.rg_count = u(18);
        rec.budget_errors = u(19);
        rec.cap_errors = u(20);
        rec.wall_seconds = d(21);
        out.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

std::vector<SweepRecord> sweep(const SweepConfig& cfg, const SweepOutput& output, bool parallel) {
    const auto points = cfg.points();

    std::map<std::size_t, SweepRecord> done;
    if (output.resume && !output.csv_path.empty() && std::filesystem::exists(output.csv_path)) {
        std::ifstream in(output.csv_path);
        for (auto& rec : read_csv(in, &cfg))
            if (rec.graphs == cfg.graphs) done[rec.point.m] = std::move(rec);
    }

    std::ofstream csv;
    if (!output.csv_path.empty()) {
        csv.open(output.csv_path, std::ios::trunc);
        if (!csv) throw Error("cannot write " + output.csv_path);
        csv << kCsvSchema << '\n' << csv_header() << '\n' << std::flush;
    }

    std::vector<SweepRecord> records;
    if (cfg.graphs == 0) return records;
    for (const auto& point : points) {
        if (auto it = done.find(point.m); it != done.end()) {
            records.push_back(it->second);
        } else {
            const auto start = std::chrono::steady_clock::now();
            std::vector<GraphResult> results(cfg.graphs);
            std::exception_ptr failure;
            const auto graphs = static_cast<long>(cfg.graphs);
#pragma omp parallel for schedule(dynamic) if (parallel)
            for (long g = 0; g < graphs; ++g) {
                try {
                    results[static_cast<std::size_t>(g)] = run_graph(cfg, point, static_cast<std::size_t>(g));
                } catch (...) {
#pragma omp critical(adsat_sweep_failure)
                    if (!failure) failure = std::current_exception();
                }
            }
            if (failure) std::rethrow_exception(failure);
            auto rec = aggregate(cfg.n, point, std::move(results));
            rec.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            records.push_back(std::move(rec));
        }
        if (csv.is_open()) csv << csv_row(cfg, records.back()) << '\n' << std::flush;
    }
    return records;
}

} // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, const SweepOutput& output) {
    return sweep(cfg, output, true);
}

std::vector<SweepRecord> run_sweep_serial(const SweepConfig& cfg, const SweepOutput& output) {
    return sweep(cfg, output, false);
}

// ---------------------------------------------------------------------------
// Statistics

AlphaStar alpha_star(const std::vector<std::pair<double, double>>& alpha_phi) {
    if (alpha_phi.size() < 5) throw ParameterError("alpha_star needs at least 5 grid points");
    auto pts = alpha_phi;
    const auto dist = [](const auto& p) { return std::abs(p.second - 0.5); };
    const double centre =
        std::min_element(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
            return dist(a) != dist(b) ? dist(a) < dist(b) : a.first < b.first;
        })->first;
    // Equal distances are common (every Phi = 0 or 1 point ties), so ties go
    // to the points nearest the best one along alpha.
    std::stable_sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
        if (dist(a) != dist(b)) return dist(a) < dist(b);
        const double ga = std::abs(a.first - centre), gb = std::abs(b.first - centre);
        return ga != gb ? ga < gb : a.first < b.first;
    });
    pts.resize(5);

    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= 5.0;
    my /= 5.0;
    double sxy = 0.0, sxx = 0.0;
    for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }

    double lo = 1.0, hi = 0.0;
    for (auto [x, y] : alpha_phi) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    AlphaStar out;
    out.no_straddle = !(lo <= 0.5 && hi >= 0.5 && lo < hi);

    if (sxx == 0.0 || sxy == 0.0) {
        if (!out.no_straddle) throw ParameterError("alpha_star: degenerate fit (zero slope)");
        out.value = kNaN;
        return out;
    }
    const double slope = sxy / sxx;
    out.value = mx + (0.5 - my) / slope;
    return out;
}

AlphaStar alpha_star(const std::vector<SweepRecord>& records) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : records) pts.emplace_back(r.point.alpha, r.phi_unsat);
    return alpha_star(pts);
}

double gamma_of(std::size_t n, std::uint64_t restarts) {
    if (restarts < 2) throw ParameterError("gamma needs at least 2 restarts");
    return static_cast<double>(n) / std::log2(static_cast<double>(restarts));
}

double phi_at_restarts(const SweepRecord& rec, std::uint64_t restarts) {
    if (rec.details.size() != rec.graphs) throw ParameterError("phi_at_restarts needs per-graph results");
    if (rec.graphs == 0) return kNaN;
    std::size_t unsat = 0;
    for (const auto& r : rec.details)
        if (r.status == GraphStatus::unsat && (!r.r_g || *r.r_g <= restarts)) ++unsat;
    return static_cast<double>(unsat) / static_cast<double>(rec.graphs);
}

AlphaStarCurve alpha_star_curve(const std::vector<SweepRecord>& records, std::size_t n,
                                const std::vector<std::uint64_t>& restart_grid, double plateau_eps) {
    AlphaStarCurve curve;
    for (auto r : restart_grid) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& rec : records) pts.emplace_back(rec.point.alpha, phi_at_restarts(rec, r));
        curve.points.push_back({r, gamma_of(n, r), alpha_star(pts)});
    }
    if (curve.points.size() >= 2) {
        const double a = curve.points[curve.points.size() - 2].alpha_star.value;
        const double b = curve.points.back().alpha_star.value;
        curve.plateau = std::isfinite(a) && std::isfinite(b) && std::abs(a - b) < plateau_eps;
    }
    return curve;
}

AlphaStarCurve alpha_star_curve(SweepConfig cfg, const std::vector<std::uint64_t>& restart_grid,
                                double plateau_eps) {
    if (restart_grid.empty()) throw ParameterError("empty restart grid");
    if (!std::is_sorted(restart_grid.begin(), restart_grid.end()))
        throw ParameterError("restart grid must be ascending");
    cfg.restarts = restart_grid.back();
    return alpha_star_curve(run_sweep(cfg), cfg.n, restart_grid, plateau_eps);
}

BalanceStats balance_statistics(const std::vector<AdsatInstance>& instances,
                                const std::vector<std::optional<NegationAssignment>>& witnesses) {
    if (instances.size() != witnesses.size()) throw ParameterError("instances and witnesses differ in length");
    BalanceStats stats;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (!witnesses[i]) continue;
        ++stats.configurations;
        if (is_balanced(instances[i], *witnesses[i])) ++stats.balanced;
    }
    if (stats.configurations == 0) {
        stats.fraction = kNaN;
        stats.ci95 = kNaN;
        return stats;
    }
    const double n = static_cast<double>(stats.configurations);
    stats.fraction = static_cast<double>(stats.balanced) / n;
    stats.ci95 = 1.96 * std::sqrt(stats.fraction * (1.0 - stats.fraction) / n);
    return stats;
}

} // namespace adsat
