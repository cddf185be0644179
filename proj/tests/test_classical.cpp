#include "fcesched/classical.hpp"
#include "fcesched/errors.hpp"
#include "fcesched/eval.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace fcesched;

TEST(Dp, ForcedAlternation) {
    const TransitionMatrix w({20.0, 60.0}, {0, 99, 99, 0});
    const DpResult r = dp_exact(w, 3, 7.0);
    EXPECT_EQ(r.schedule.levels, (std::vector<std::size_t>{0, 1, 0}));
    EXPECT_EQ(r.s_max, 198.0);
    EXPECT_EQ(r.energy, -1386.0);
}

TEST(Dp, StaysOnDiagonal) {
    // Weights outside the discrete set are fine for the DP itself.
    const TransitionMatrix w({20.0, 60.0}, {50, 10, 10, 50});
    const DpResult r = dp_exact(w, 3, 7.0);
    EXPECT_EQ(r.schedule.levels, (std::vector<std::size_t>{0, 0, 0}));
    EXPECT_EQ(r.s_max, 100.0);
}

TEST(Dp, ZeroMatrixGivesZeroEnergy) {
    const TransitionMatrix w(default_levels(4), std::vector<int>(16, 0));
    const DpResult r = dp_exact(w, 4, 7.0);
    EXPECT_EQ(r.s_max, 0.0);
    EXPECT_FALSE(std::signbit(r.energy));
    EXPECT_EQ(r.schedule.levels, (std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST(Dp, RejectsSingleOrder) {
    const TransitionMatrix w({20.0, 60.0}, {0, 99, 99, 0});
    EXPECT_THROW((void)dp_exact(w, 1, 7.0), DomainError);
}

TEST(Dp, MatchesExhaustiveEnumeration) {
    Rng rng(71);
    for (int rep = 0; rep < 120; ++rep) {
        const std::size_t z = 2 + rep % 8;
        const std::size_t n_orders = 2 + rep % 5;
        const TransitionMatrix w = oracle::random_matrix(z, rng);
        const DpResult r = dp_exact(w, n_orders, 7.0);
        const oracle::BestPath best = oracle::exhaustive_schedule_max(w.entries(), z, n_orders);
        EXPECT_EQ(r.s_max, best.s_max);
        EXPECT_EQ(r.schedule.levels, best.schedule);
        EXPECT_EQ(s_max(w, r.schedule), r.s_max);
    }
}

TEST(Dp, SeededNineByNineAtFiveOrders) {
    Rng rng(20240611);
    const TransitionMatrix w = oracle::random_matrix(9, rng);
    EXPECT_EQ(dp_exact(w, 5, 7.0).s_max, oracle::exhaustive_schedule_max(w.entries(), 9, 5).s_max);
}

TEST(BruteForce, TwoOrdersNineLevelsEqualsDp) {
    for (std::uint64_t seed : {1U, 2U, 3U}) {
        const TransitionMatrix w = planted_transition_matrix(9, seed, 90);
        const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
        const BruteForceResult bf = brute_force(q);
        const DpResult dp = dp_exact(w, 2, 7.0);
        EXPECT_EQ(bf.energy, dp.energy);
        ASSERT_TRUE(is_feasible(bf.bits, 2, 9));
        EXPECT_EQ(decode_schedule(bf.bits, 2, 9), dp.schedule);
    }
}

TEST(Sa, ParamsValidation) {
    SaParams p;
    EXPECT_NO_THROW(p.validate());
    p.num_reads = 0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = SaParams{};
    p.sweeps = 0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = SaParams{};
    p.beta_hot = 20.0;
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Sa, NeverBelowGlobalMinimumAndUsuallyAtIt) {
    const TransitionMatrix w = planted_transition_matrix(9, 1);
    const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
    const double bf = brute_force(q).energy;
    std::size_t hits = 0;
    std::size_t reads = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SaParams p;
        p.seed = seed;
        const SolverResult r = sa_solve(q, p);
        ASSERT_EQ(r.per_trial.size(), 10U);
        for (const TrialRecord &t : r.per_trial) {
            EXPECT_GE(t.energy, bf);
            hits += t.energy == bf;
            ++reads;
        }
        EXPECT_EQ(r.best_energy, bf);
    }
    EXPECT_GE(hits * 10, reads * 9);
}

TEST(Sa, BackgroundWeightsNeverBeatBruteForce) {
    for (std::uint64_t seed : {11U, 12U}) {
        const TransitionMatrix w = planted_transition_matrix(9, seed, 50);
        const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
        const double bf = brute_force(q).energy;
        SaParams p;
        p.seed = seed;
        p.sweeps = 5000;
        const SolverResult r = sa_solve(q, p);
        for (const TrialRecord &t : r.per_trial) {
            EXPECT_GE(t.energy, bf);
        }
    }
}

TEST(Sa, TrialRecordsAreConsistent) {
    const TransitionMatrix w = planted_transition_matrix(9, 3);
    const QuboProblem q = build_qubo(w, 5, 1000.0, 7.0);
    SaParams p;
    p.sweeps = 50;
    const SolverResult r = sa_solve(q, p);
    for (const TrialRecord &t : r.per_trial) {
        EXPECT_EQ(t.energy, energy(q, t.bits));
        EXPECT_EQ(t.feasible, is_feasible(t.bits, 5, 9));
        EXPECT_EQ(t.schedule.has_value(), t.feasible);
        if (t.feasible) {
            EXPECT_EQ(*t.s_max, s_max(w, *t.schedule));
        }
        EXPECT_GE(r.best_energy, -7.0 * dp_exact(w, 5, 7.0).s_max);
        EXPECT_LE(r.best_energy, t.energy);
    }
}

TEST(Sa, Reproducible) {
    const TransitionMatrix w = planted_transition_matrix(9, 4, 40);
    const QuboProblem q = build_qubo(w, 6, 1000.0, 7.0);
    SaParams p;
    p.sweeps = 200;
    p.seed = 99;
    const SolverResult a = sa_solve(q, p, Exec::parallel);
    const SolverResult b = sa_solve(q, p, Exec::parallel);
    const SolverResult c = sa_solve(q, p, Exec::serial);
    ASSERT_EQ(a.per_trial.size(), b.per_trial.size());
    for (std::size_t t = 0; t < a.per_trial.size(); ++t) {
        EXPECT_EQ(a.per_trial[t].bits, b.per_trial[t].bits);
        EXPECT_EQ(a.per_trial[t].bits, c.per_trial[t].bits);
    }
    p.seed = 100;
    const SolverResult d = sa_solve(q, p);
    bool any_diff = false;
    for (std::size_t t = 0; t < a.per_trial.size(); ++t) {
        any_diff |= !(a.per_trial[t].bits == d.per_trial[t].bits);
    }
    EXPECT_TRUE(any_diff);
}

TEST(Collect, LowestEnergyEarliestOnTies) {
    const TransitionMatrix w({20.0, 60.0}, {0, 99, 99, 0});
    const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
    std::vector<TrialRecord> trials{
        make_trial(q, Bitstring(std::vector<std::uint8_t>{1, 0, 1, 0})),
        make_trial(q, Bitstring(std::vector<std::uint8_t>{0, 1, 1, 0})),
        make_trial(q, Bitstring(std::vector<std::uint8_t>{1, 0, 0, 1}))};
    const SolverResult r = collect_trials(trials, 0.0);
    EXPECT_EQ(r.best_energy, -693.0);
    EXPECT_EQ(r.best_bits, trials[1].bits);
    EXPECT_EQ(r.schedule->levels, (std::vector<std::size_t>{1, 0}));
    EXPECT_THROW((void)collect_trials({}, 0.0), EmptyInputError);
}
