#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "adsat/anneal.hpp"
#include "adsat/complete.hpp"
#include "adsat/errors.hpp"

using namespace adsat;

namespace {

struct Recorded {
    std::vector<TraceRow> rows;
    AnnealOptions options() {
        AnnealOptions o;
        o.trace = [this](const TraceRow& r) { rows.push_back(r); };
        return o;
    }
};

void expect_verified(const AdsatInstance& inst, const NegationAssignment& witness) {
    EXPECT_TRUE(witness.is_legal());
    EXPECT_FALSE(dpll_solve(materialize(inst, witness)).is_sat());
}

} // namespace

TEST(Schedule, Endpoints) {
    const auto plain = Schedule::plain(500);
    EXPECT_EQ(plain.beta(100), 20.0);
    EXPECT_NEAR(plain.beta(1), 2.0, 1e-12);
    EXPECT_NEAR(plain.beta(500), 2.0 * std::sqrt(500.0), 1e-12);
    EXPECT_EQ(plain.total_steps(), 500u);

    const auto chunked = Schedule::chunked(100, 3);
    EXPECT_EQ(chunked.total_steps(), 400u);
    EXPECT_EQ(chunked.beta(400), 20.0);
    EXPECT_NEAR(chunked.beta(1), 2.0 / std::sqrt(4.0), 1e-12);

    for (std::uint64_t dm : {0u, 1u, 7u, 50u}) {
        for (std::uint64_t iters : {2u, 10u, 2000u}) {
            const auto s = Schedule::chunked(iters, dm);
            EXPECT_NEAR(s.beta(s.total_steps()), 2.0 * std::sqrt(static_cast<double>(iters)), 1e-12);
            EXPECT_LE(s.beta(1), 2.0);
            if (dm > 0) EXPECT_GT(s.beta(dm * iters + 1), Schedule::plain(iters).beta(1));
        }
    }
}

TEST(Schedule, NonDecreasing) {
    const auto s = Schedule::chunked(37, 5);
    for (std::uint64_t t = 1; t < s.total_steps(); ++t) ASSERT_LE(s.beta(t), s.beta(t + 1));
}

TEST(Anneal, StartAlreadyUnsat) {
    Rng rng(1);
    const auto inst = generate_random_instance(6, 14, 3, rng);
    const auto v = cover_search_adsat(inst);
    ASSERT_TRUE(v.is_unsat());
    const auto out = sa_adsat(inst, *v.witness_negations, 100, Schedule::plain(100), rng);
    EXPECT_EQ(out.steps_used, 0u);
    EXPECT_EQ(out.sigma_star, 0.0);
    ASSERT_TRUE(out.found_unsat());
    EXPECT_EQ(*out.unsat_witness, *v.witness_negations);
}

TEST(Anneal, RejectsIllegalStart) {
    Rng rng(2);
    const auto inst = generate_random_instance(8, 12, 3, rng);
    const auto other = generate_random_instance(8, 13, 3, rng);
    EXPECT_THROW(sa_adsat(inst, NegationAssignment(other), 10, Schedule::plain(10), rng), InvalidInstance);
}

TEST(Anneal, FollowsTheAcceptanceRule) {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto inst = generate_random_instance(10, 15, 3, rng);
        const auto j0 = random_balanced_negations(inst, rng);
        Recorded rec;
        const auto out = sa_adsat(inst, j0, 300, Schedule::plain(300), rng, rec.options());
        double current = complexity(inst, j0).sigma;
        double best = current;
        std::uint64_t t_prev = 0;
        for (const auto& r : rec.rows) {
            EXPECT_EQ(r.t, t_prev + 1);
            t_prev = r.t;
            EXPECT_EQ(r.beta, Schedule::plain(300).beta(r.t));
            if (r.sigma <= current) EXPECT_TRUE(r.accepted) << "t=" << r.t;   // includes equal cost
            if (r.accepted) current = r.sigma;
            best = std::min(best, current);
        }
        EXPECT_EQ(out.sigma_star, best);
        EXPECT_EQ(out.steps_used, rec.rows.size());
        EXPECT_TRUE(out.last_negations.is_legal());
        EXPECT_NEAR(complexity(inst, out.last_negations).sigma, current, 0.0);
        EXPECT_EQ(out.found_unsat(), out.sigma_star == 0.0);
        if (out.unsat_witness) expect_verified(inst, *out.unsat_witness);
    }
}

TEST(Anneal, GreedyLimitOnlyImproves) {
    Rng rng(4);
    for (int i = 0; i < 10; ++i) {
        const auto inst = generate_random_instance(12, 20, 3, rng);
        Recorded rec;
        auto opts = rec.options();
        opts.fixed_beta = std::numeric_limits<double>::infinity();
        const auto j0 = random_balanced_negations(inst, rng);
        sa_adsat(inst, j0, 400, Schedule::plain(400), rng, opts);
        double current = complexity(inst, j0).sigma;
        for (const auto& r : rec.rows) {
            EXPECT_EQ(r.accepted, r.sigma < current);
            if (r.accepted) current = r.sigma;
        }
    }
}

TEST(Anneal, FindsAndVerifiesUnsat) {
    Rng rng(5);
    int found = 0;
    for (int i = 0; i < 10; ++i) {
        const auto inst = generate_random_instance(7, 21, 3, rng);
        Recorded rec;
        const auto out = sa_adsat(inst, random_balanced_negations(inst, rng), 2000, Schedule::plain(2000), rng,
                                  rec.options());
        if (!out.found_unsat()) continue;
        ++found;
        expect_verified(inst, *out.unsat_witness);
        if (!rec.rows.empty()) {
            EXPECT_EQ(rec.rows.back().sigma, 0.0);
            EXPECT_TRUE(rec.rows.back().accepted);
        }
    }
    EXPECT_GT(found, 5);
}

TEST(Anneal, Deterministic) {
    Rng g(6);
    const auto inst = generate_random_instance(9, 16, 3, g);
    auto run = [&] {
        Rng rng(77);
        return restart_sa(inst, 20, 200, rng);
    };
    const auto a = run(), b = run();
    EXPECT_EQ(a.sigma_star, b.sigma_star);
    EXPECT_EQ(a.r_g, b.r_g);
    EXPECT_EQ(a.witness, b.witness);
    EXPECT_EQ(a.steps_used, b.steps_used);

    auto run_iv = [&] {
        Rng rng(78);
        return improved_variant(inst, 5, 20, 200, rng);
    };
    const auto c = run_iv(), d = run_iv();
    EXPECT_EQ(c.sigma_star, d.sigma_star);
    EXPECT_EQ(c.r_g, d.r_g);
    EXPECT_EQ(c.witness, d.witness);
}

TEST(Restarts, Bookkeeping) {
    Rng rng(7);
    EXPECT_THROW(restart_sa(generate_random_instance(7, 10, 3, rng), 0, 10, rng), ParameterError);
    for (int i = 0; i < 10; ++i) {
        const auto inst = generate_random_instance(7, 20, 3, rng);
        const auto out = restart_sa(inst, 50, 500, rng);
        ASSERT_TRUE(out.found_unsat());
        EXPECT_LE(*out.r_g, 50u);
        EXPECT_EQ(out.restarts_run, *out.r_g);
        EXPECT_EQ(out.sigma_star, 0.0);
        expect_verified(inst, *out.witness);
    }
    const auto sat = generate_random_instance(8, 8, 3, rng);   // far below the transition
    const auto out = restart_sa(sat, 3, 50, rng);
    EXPECT_FALSE(out.found_unsat());
    EXPECT_EQ(out.restarts_run, 3u);
    EXPECT_GT(out.sigma_star, 0.0);
}

TEST(Restarts, FirstRestartHit) {
    Rng rng(8);
    // all C(6,3) = 20 triples: the first run gets there
    const auto inst = generate_random_instance(6, 20, 3, rng);
    const auto out = restart_sa(inst, 10, 2000, rng);
    ASSERT_TRUE(out.found_unsat());
    EXPECT_EQ(*out.r_g, 1u);
}

TEST(Improved, ZeroExpansionIsAlternatingRestartSa) {
    Rng g(9);
    const auto inst = generate_random_instance(9, 15, 3, g);
    Rng a(10), b(10);
    const auto iv = improved_variant(inst, 0, 5, 150, a);

    RestartOutcome manual;
    manual.sigma_star = std::numeric_limits<double>::infinity();
    for (std::uint64_t r = 1; r <= 5; ++r) {
        const auto run = sa_adsat(inst, alternately_balanced_negations(inst), 150, Schedule::plain(150), b);
        manual.restarts_run = r;
        if (run.found_unsat()) {
            manual.r_g = r;
            manual.sigma_star = 0.0;
            break;
        }
        manual.sigma_star = std::min(manual.sigma_star, run.sigma_star);
    }
    EXPECT_EQ(iv.sigma_star, manual.sigma_star);
    EXPECT_EQ(iv.r_g, manual.r_g);
    EXPECT_EQ(iv.restarts_run, manual.restarts_run);
}

TEST(Improved, ChunksWalkTheGlobalSchedule) {
    Rng rng(11);
    const auto inst = generate_random_instance(10, 16, 3, rng);
    Recorded rec;
    const std::uint64_t dm = 4, iters = 60;
    improved_variant(inst, dm, 1, iters, rng, rec.options());
    const auto s = Schedule::chunked(iters, dm);
    std::uint64_t last = 0;
    for (const auto& r : rec.rows) {
        EXPECT_GT(r.t, last);
        EXPECT_LE(r.t, s.total_steps());
        EXPECT_EQ(r.beta, s.beta(r.t));
        last = r.t;
    }
}

TEST(Improved, FindsUnsatAndVerifies) {
    Rng rng(12);
    for (int i = 0; i < 5; ++i) {
        const auto inst = generate_random_instance(8, 18, 3, rng);
        const auto out = improved_variant(inst, default_delta_m(8), 50, 300, rng);
        ASSERT_TRUE(out.found_unsat());
        expect_verified(inst, *out.witness);
        EXPECT_EQ(out.witness->size(), inst.n_edges());
    }
}

TEST(Improved, ExpansionMustFit) {
    Rng rng(13);
    const auto inst = generate_random_instance(5, 8, 3, rng);
    EXPECT_THROW(improved_variant(inst, 3, 1, 10, rng), ParameterError);   // 11 > C(5,3)
    EXPECT_EQ(default_delta_m(15), 8u);
    EXPECT_EQ(default_delta_m(100), 50u);
}
