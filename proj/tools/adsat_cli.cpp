// adsat: command line front end for the AdSAT solvers and experiments.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <fmt/format.h>

#include "adsat/adsat2.hpp"
#include "adsat/anneal.hpp"
#include "adsat/complete.hpp"
#include "adsat/errors.hpp"
#include "adsat/harness.hpp"
#include "adsat/instance.hpp"
#include "adsat/satcore.hpp"

using namespace adsat;

namespace {

struct SweepFlags {
    std::size_t n = 7;
    std::size_t k = 3;
    double alpha_min = 0.5, alpha_max = 3.5, alpha_step = 0.0;
    std::vector<std::size_t> l_grid;
    std::size_t graphs = 100;
    std::string algorithm = "complete";
    std::uint64_t iters = 500, restarts = 100, delta_m = 0;
    std::uint64_t seed = 1;
    std::uint64_t budget = 0;
    std::size_t cap = 30;
    std::string out;
    bool resume = false;
    int threads = 0;

    void attach(CLI::App* app) {
        app->add_option("--n", n, "number of bits N")->required();
        app->add_option("--k", k, "clause width K");
        app->add_option("--alpha-min", alpha_min, "lowest clause density");
        app->add_option("--alpha-max", alpha_max, "highest clause density");
        app->add_option("--alpha-step", alpha_step, "density step (default 1/N)");
        app->add_option("--l-grid", l_grid, "variable degrees L; selects the regular ensemble")->delimiter(',');
        app->add_option("--graphs", graphs, "graphs per grid point");
        app->add_option("--algorithm", algorithm, "complete | exact | sa | iv | adsat2");
        app->add_option("--iters", iters, "annealing steps I per run (per chunk for iv)");
        app->add_option("--restarts", restarts, "restarts R");
        app->add_option("--delta-m", delta_m, "clauses added by iv (default ceil(N/2))");
        app->add_option("--seed", seed, "master seed");
        app->add_option("--budget", budget, "node budget for model counting and cover search (0 = unlimited)");
        app->add_option("--cap", cap, "max free negations for the complete algorithm");
        app->add_option("--out", out, "CSV output path");
        app->add_flag("--resume", resume, "reuse grid points already in --out");
        app->add_option("--threads", threads, "OpenMP worker threads (0 = runtime default)");
    }

    SweepConfig config() const {
        SweepConfig cfg;
        cfg.n = n;
        cfg.k = k;
        cfg.graphs = graphs;
        cfg.algorithm = algorithm_from_string(algorithm);
        cfg.iters = iters;
        cfg.restarts = restarts;
        if (delta_m) cfg.delta_m = delta_m;
        cfg.master_seed = seed;
        cfg.counting.node_budget = budget;
        cfg.search.node_budget = budget;
        cfg.complete.max_free_edges = cap;
        if (!l_grid.empty()) {
            cfg.kind = EnsembleKind::regular;
            cfg.l_grid = l_grid;
        } else {
            const double step = alpha_step > 0 ? alpha_step : 1.0 / static_cast<double>(n);
            cfg.alpha_grid = make_grid(alpha_min, alpha_max, step);
        }
        return cfg;
    }
};

void set_threads([[maybe_unused]] int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
}

std::optional<std::ofstream> open_out(const std::string& path) {
    if (path.empty()) return std::nullopt;
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    return f;
}

void print_records(const SweepConfig& cfg, const std::vector<SweepRecord>& records) {
    std::cout << kCsvSchema << '\n' << csv_header() << '\n';
    for (const auto& r : records) std::cout << csv_row(cfg, r) << '\n';
}

int cmd_generate(std::size_t n, std::size_t k, double alpha, std::size_t l, std::uint64_t seed,
                 const std::string& out) {
    Rng rng(seed);
    const auto inst = l ? generate_regular_instance(n, l, k, rng)
                        : generate_random_instance(EnsembleParams{n, k, EnsembleKind::random_uniform, alpha, 0, seed}, rng);
    if (out.empty()) write_instance(std::cout, inst);
    else save_instance(out, inst);
    return 0;
}

int cmd_decide_complete(const std::string& path, std::size_t cap, const std::string& method,
                        std::uint64_t budget, const std::string& witness_out) {
    const auto inst = load_instance(path);
    AdsatVerdict v;
    if (method == "enumerate") v = complete_adsat(inst, CompleteOptions{cap});
    else if (method == "search") v = cover_search_adsat(inst, CoverSearchOptions{budget});
    else throw ParameterError("--method must be 'enumerate' or 'search'");
    std::cout << "verdict " << to_string(v.status) << '\n' << "configs_tested " << v.configs_tested << '\n';
    if (v.witness_negations) {
        if (auto f = open_out(witness_out)) {
            write_negations(*f, *v.witness_negations);
            std::cout << "witness " << witness_out << '\n';
        } else {
            write_negations(std::cout, *v.witness_negations);
        }
    }
    return 0;
}

int cmd_decide_2adsat(const std::string& path) {
    const auto inst = load_instance(path);
    const auto v = decide_2adsat(inst);
    std::cout << "verdict " << to_string(v.status) << '\n';
    for (std::size_t i = 0; i < v.components.size(); ++i) {
        const auto& c = v.components[i];
        std::cout << fmt::format("component {} nodes {} edges {} class {}\n", i, c.nodes, c.edges, to_string(c.cls));
    }
    return 0;
}

struct AnnealFlags {
    std::string instance;
    std::uint64_t iters = 500, restarts = 100, delta_m = 0, seed = 1, budget = 0;
    std::string schedule = "plain";
    std::string trace_out = "trace.csv";
    std::string witness_out;
};

int cmd_anneal(const AnnealFlags& fl, bool improved) {
    const auto inst = load_instance(fl.instance);
    Rng rng(fl.seed);
    AnnealOptions opts;
    opts.counting.node_budget = fl.budget;

    std::optional<std::ofstream> trace;
    if (fl.schedule == "trace") {
        trace = open_out(fl.trace_out);
        *trace << "t,beta,sigma,accepted\n";
        opts.trace = [&](const TraceRow& row) {
            *trace << fmt::format("{},{:.17g},{:.17g},{}\n", row.t, row.beta, row.sigma, row.accepted ? 1 : 0);
        };
    } else if (fl.schedule != "plain") {
        throw ParameterError("--schedule must be 'plain' or 'trace'");
    }

    const auto dm = fl.delta_m ? fl.delta_m : default_delta_m(inst.n_bits());
    const auto out = improved ? improved_variant(inst, dm, fl.restarts, fl.iters, rng, opts)
                              : restart_sa(inst, fl.restarts, fl.iters, rng, opts);
    std::cout << "verdict " << (out.found_unsat() ? "UNSAT" : "undecided") << '\n'
              << fmt::format("sigma_star {:.17g}\n", out.sigma_star)
              << "restarts_run " << out.restarts_run << '\n'
              << "steps_used " << out.steps_used << '\n';
    if (out.r_g) std::cout << "r_g " << *out.r_g << '\n';
    if (improved) std::cout << "delta_m " << dm << '\n';
    if (out.witness) {
        if (auto f = open_out(fl.witness_out)) write_negations(*f, *out.witness);
        else write_negations(std::cout, *out.witness);
    }
    return 0;
}

int cmd_sweep(const SweepFlags& fl) {
    set_threads(fl.threads);
    const auto cfg = fl.config();
    const auto records = run_sweep(cfg, SweepOutput{fl.out, fl.resume});
    if (fl.out.empty()) print_records(cfg, records);
    else std::cerr << "wrote " << records.size() << " rows to " << fl.out << '\n';
    return 0;
}

int cmd_alpha_star(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw Error("cannot open " + csv_path);
    const auto a = alpha_star(read_csv(in));
    std::cout << fmt::format("alpha_star {:.6f}\n", a.value);
    if (a.no_straddle) std::cout << "warning: Phi_UNSAT does not straddle 1/2, value is an extrapolation\n";
    return 0;
}

int cmd_gamma_curve(const SweepFlags& fl, std::vector<std::uint64_t> r_grid, double eps) {
    set_threads(fl.threads);
    auto cfg = fl.config();
    std::sort(r_grid.begin(), r_grid.end());
    const auto curve = alpha_star_curve(cfg, r_grid, eps);
    auto out = open_out(fl.out);
    std::ostream& os = out ? *out : std::cout;
    os << "restarts,gamma,alpha_star,no_straddle\n";
    for (const auto& p : curve.points)
        os << fmt::format("{},{:.17g},{:.17g},{}\n", p.restarts, p.gamma, p.alpha_star.value,
                          p.alpha_star.no_straddle ? 1 : 0);
    std::cerr << (curve.plateau ? "plateau reached\n" : "no plateau\n");
    return 0;
}

int cmd_balance_stats(const SweepFlags& fl, double alpha) {
    set_threads(fl.threads);
    auto cfg = fl.config();
    cfg.kind = EnsembleKind::random_uniform;
    cfg.alpha_grid = {alpha};
    cfg.algorithm = algorithm_from_string(fl.algorithm == "complete" ? "iv" : fl.algorithm);
    const auto records = run_sweep(cfg);
    const auto& rec = records.front();
    std::vector<AdsatInstance> insts;
    std::vector<std::optional<NegationAssignment>> witnesses;
    for (std::size_t g = 0; g < rec.details.size(); ++g) {
        insts.push_back(sweep_instance(cfg, rec.point, g));
        witnesses.push_back(rec.details[g].witness);
    }
    const auto stats = balance_statistics(insts, witnesses);
    std::cout << fmt::format("unsat_graphs {}\nbalanced {}\nfraction {:.6f}\nci95 {:.6f}\n", stats.configurations,
                             stats.balanced, stats.fraction, stats.ci95);
    return 0;
}

int cmd_to_dimacs(const std::string& inst_path, const std::string& neg_path) {
    const auto inst = load_instance(inst_path);
    NegationAssignment neg(inst);
    if (!neg_path.empty()) {
        std::ifstream in(neg_path);
        if (!in) throw Error("cannot open " + neg_path);
        neg = read_negations(in, inst);
    }
    write_dimacs(std::cout, materialize(inst, neg));
    return 0;
}

int cmd_count(const std::string& path, std::uint64_t budget) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    const auto f = read_dimacs(in);
    const auto res = dpll_solve(f);
    const auto c = complexity(f, CountOptions{budget});
    std::cout << "status " << to_string(res.status) << '\n'
              << "models " << c.count << '\n'
              << fmt::format("sigma {:.17g}\n", c.sigma);
    return 0;
}

} // namespace


int main(int argc, char** argv) {
    CLI::App app{"Adversarial SAT solvers and phase-transition experiments"};
    app.require_subcommand(1);

    std::size_t gen_n = 7, gen_k = 3, gen_l = 0;
    double gen_alpha = 1.0;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "draw a random or L-regular instance");
    gen->add_option("--n", gen_n, "number of bits")->required();
    gen->add_option("--k", gen_k, "clause width");
    gen->add_option("--alpha", gen_alpha, "clause density M/N");
    gen->add_option("--l", gen_l, "variable degree (regular ensemble)");
    gen->add_option("--seed", gen_seed, "seed");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    std::string dc_path, dc_witness, dc_method = "enumerate";
    std::size_t dc_cap = 30;
    std::uint64_t dc_budget = 0;
    auto* dc = app.add_subcommand("decide-complete", "exact decision by exhaustive negation enumeration");
    dc->add_option("instance", dc_path, "instance file")->required();
    dc->add_option("--cap", dc_cap, "max free negations (enumerate)");
    dc->add_option("--method", dc_method, "'enumerate' (Gray code over all negations) or 'search' (cover search)");
    dc->add_option("--budget", dc_budget, "node budget for search (0 = unlimited)");
    dc->add_option("--witness-out", dc_witness, "write the UNSAT witness here");

    std::string d2_path;
    auto* d2 = app.add_subcommand("decide-2adsat", "polynomial decision for K=2 instances");
    d2->add_option("instance", d2_path, "instance file")->required();

    AnnealFlags an_flags, iv_flags;
    auto attach_anneal = [](CLI::App* sub, AnnealFlags& fl, bool improved) {
        sub->add_option("instance", fl.instance, "instance file")->required();
        sub->add_option("--iters", fl.iters, improved ? "steps per chunk I" : "steps per restart I");
        sub->add_option("--restarts", fl.restarts, "restarts R");
        if (improved) sub->add_option("--delta-m", fl.delta_m, "clauses added per restart (default ceil(N/2))");
        sub->add_option("--seed", fl.seed, "seed");
        sub->add_option("--budget", fl.budget, "model-counting node budget (0 = unlimited)");
        sub->add_option("--schedule", fl.schedule, "'plain' or 'trace' (per-step CSV)");
        sub->add_option("--trace-out", fl.trace_out, "trace CSV path");
        sub->add_option("--witness-out", fl.witness_out, "write the UNSAT witness here");
    };
    auto* an = app.add_subcommand("anneal", "simulated annealing with restarts");
    attach_anneal(an, an_flags, false);
    auto* iv = app.add_subcommand("anneal-iv", "clause-peeling annealing with restarts");
    attach_anneal(iv, iv_flags, true);

    SweepFlags sweep_flags;
    auto* sw = app.add_subcommand("sweep", "Phi_UNSAT sweep over a density or degree grid");
    sweep_flags.attach(sw);

    std::string as_csv;
    auto* as = app.add_subcommand("alpha-star", "interpolated critical density from a sweep CSV");
    as->add_option("csv", as_csv, "sweep CSV")->required();

    SweepFlags gc_flags;
    gc_flags.algorithm = "iv";
    std::vector<std::uint64_t> r_grid{16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    double eps = 0.05;
    auto* gc = app.add_subcommand("gamma-curve", "alpha*_N as a function of gamma = N / log2 R");
    gc_flags.attach(gc);
    gc->add_option("--r-grid", r_grid, "restart budgets")->delimiter(',');
    gc->add_option("--plateau-eps", eps, "plateau tolerance on alpha*");

    SweepFlags bs_flags;
    bs_flags.algorithm = "iv";
    double bs_alpha = 3.0;
    auto* bs = app.add_subcommand("balance-stats", "fraction of balanced UNSAT witnesses");
    bs_flags.attach(bs);
    bs->add_option("--alpha", bs_alpha, "clause density");

    std::string td_inst, td_neg;
    auto* td = app.add_subcommand("to-dimacs", "export the CNF fixed by a negation file");
    td->add_option("instance", td_inst, "instance file")->required();
    td->add_option("negations", td_neg, "negation file (default all zero)");

    std::string ct_path;
    std::uint64_t ct_budget = 0;
    auto* ct = app.add_subcommand("count", "solve and count models of a DIMACS formula");
    ct->add_option("dimacs", ct_path, "DIMACS CNF file")->required();
    ct->add_option("--budget", ct_budget, "node budget (0 = unlimited)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_generate(gen_n, gen_k, gen_alpha, gen_l, gen_seed, gen_out);
        if (*dc) return cmd_decide_complete(dc_path, dc_cap, dc_method, dc_budget, dc_witness);
        if (*d2) return cmd_decide_2adsat(d2_path);
        if (*an) return cmd_anneal(an_flags, false);
        if (*iv) return cmd_anneal(iv_flags, true);
        if (*sw) return cmd_sweep(sweep_flags);
        if (*as) return cmd_alpha_star(as_csv);
        if (*gc) return cmd_gamma_curve(gc_flags, r_grid, eps);
        if (*bs) return cmd_balance_stats(bs_flags, bs_alpha);
        if (*td) return cmd_to_dimacs(td_inst, td_neg);
        if (*ct) return cmd_count(ct_path, ct_budget);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
